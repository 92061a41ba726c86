#pragma once

#include <span>

#include "omtl/topology.hpp"
#include "omtl/types.hpp"

namespace omtl {

// Independent per-task online ADMM: the K = 1 specialization of the main
// learner with the unique pattern pinned at zero and no relationship matrix.
struct SingleTaskState {
  Vector w;
  Vector u_local;
  Vector z;

  static SingleTaskState zeros(std::size_t d);
  bool operator==(const SingleTaskState& other) const;
};

SingleTaskState admm_single_round(const SingleTaskState& state, const Sample& sample,
                                  const Hyperparameters& hp);

enum class StepSchedule {
  kInvSqrt,    // step0 / sqrt(t)
  kInvSquare,  // step0 / t^2
};

double dpsgd_step_size(StepSchedule schedule, double step0, std::size_t t);

// Uniform weights over each worker's closed neighborhood.
Matrix uniform_mixing(const Topology& topo);

struct DPSGDState {
  std::vector<Vector> w;
  double step0 = 0.1;
  Matrix mixing;
  StepSchedule schedule = StepSchedule::kInvSqrt;

  static DPSGDState zeros(const Topology& topo, std::size_t d, double step0 = 0.1,
                          StepSchedule schedule = StepSchedule::kInvSqrt);
};

// w^k <- sum_j mixing(k, j) w^j - gamma_t * hinge_subgradient(w^k, x^k, y^k).
// Throws InvalidRoundError for t == 0.
DPSGDState dpsgd_round(const DPSGDState& state, std::span<const Sample> samples, std::size_t t);

}  // namespace omtl

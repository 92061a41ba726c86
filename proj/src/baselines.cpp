#include "omtl/baselines.hpp"

#include <cmath>

#include "omtl/admm.hpp"
#include "omtl/errors.hpp"
#include "omtl/model.hpp"

namespace omtl {

SingleTaskState SingleTaskState::zeros(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return SingleTaskState{Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)};
}

bool SingleTaskState::operator==(const SingleTaskState& other) const {
  return w.size() == other.w.size() && w == other.w && u_local == other.u_local &&
         z == other.z;
}

SingleTaskState admm_single_round(const SingleTaskState& state, const Sample& sample,
                                  const Hyperparameters& hp) {
  Hyperparameters single = hp;
  single.K = 1;
  const Vector zero_v = Vector::Zero(state.w.size());
  const WorkerSlice slice{state.w, zero_v, state.z, 0};

  const Vector grad = hinge_subgradient(state.w, sample.features, sample.label);
  SingleTaskState next;
  next.w = update_w(slice, state.u_local, grad, single);
  const Vector w_list[] = {next.w};
  const Vector z_list[] = {state.z};
  next.u_local = update_u(w_list, z_list, single);
  next.z = update_z(slice, next.w, next.u_local, zero_v, single);
  return next;
}

double dpsgd_step_size(StepSchedule schedule, double step0, std::size_t t) {
  if (t == 0) throw InvalidRoundError("D-PSGD rounds are 1-based");
  const double td = static_cast<double>(t);
  return schedule == StepSchedule::kInvSqrt ? step0 / std::sqrt(td) : step0 / (td * td);
}

Matrix uniform_mixing(const Topology& topo) {
  const auto K = static_cast<Eigen::Index>(topo.size());
  Matrix m = Matrix::Zero(K, K);
  for (std::size_t k = 0; k < topo.size(); ++k) {
    const auto hood = topo.closed_neighborhood(k);
    const double weight = 1.0 / static_cast<double>(hood.size());
    for (std::size_t j : hood) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = weight;
  }
  return m;
}

DPSGDState DPSGDState::zeros(const Topology& topo, std::size_t d, double step0,
                             StepSchedule schedule) {
  if (topo.kind() == TopologyKind::kStar) {
    throw TopologyError("D-PSGD needs a ring or full topology");
  }
  DPSGDState s;
  s.w.assign(topo.size(), Vector::Zero(static_cast<Eigen::Index>(d)));
  s.step0 = step0;
  s.mixing = uniform_mixing(topo);
  s.schedule = schedule;
  return s;
}

DPSGDState dpsgd_round(const DPSGDState& state, std::span<const Sample> samples, std::size_t t) {
  const double gamma = dpsgd_step_size(state.schedule, state.step0, t);
  const std::size_t K = state.w.size();
  if (samples.size() != K || static_cast<std::size_t>(state.mixing.rows()) != K ||
      static_cast<std::size_t>(state.mixing.cols()) != K) {
    throw DimensionError("D-PSGD round: task count mismatch");
  }
  DPSGDState next = state;
  for (std::size_t k = 0; k < K; ++k) {
    Vector mixed = Vector::Zero(state.w[k].size());
    for (std::size_t j = 0; j < K; ++j) {
      const double m = state.mixing(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      if (m != 0.0) mixed += m * state.w[j];
    }
    next.w[k] = mixed - gamma * hinge_subgradient(state.w[k], samples[k].features,
                                                  samples[k].label);
  }
  return next;
}

}  // namespace omtl

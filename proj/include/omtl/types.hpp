#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace omtl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Label : int { kNegative = -1, kPositive = 1 };

inline double to_double(Label y) { return static_cast<double>(static_cast<int>(y)); }

// Accepts only -1 and +1; anything else is a LabelError (line 0).
Label label_from_int(int value);

struct Sample {
  Vector features;
  Label label = Label::kPositive;
};

enum class EtaSchedule {
  kFixed,      // eta used as given for every round
  kSqrtRound,  // eta_t = sqrt(t), t being the 1-based round index
};

struct Hyperparameters {
  double rho = 0.1;
  double eta = 1.0;
  double lambda1 = 0.01;
  double lambda2 = 0.1;
  double lambda3 = 0.01;
  double lambda4 = 0.01;
  std::size_t K = 1;
  std::size_t d = 1;
  std::size_t T = 1;
  double eps_inv = 1e-6;
  double eps_tr = 1e-10;
  EtaSchedule eta_schedule = EtaSchedule::kFixed;

  // Defaults: rho = lambda2 = 0.1, lambda1 = lambda3 = lambda4 = 0.01,
  // eta = sqrt(T).
  static Hyperparameters defaults(std::size_t K, std::size_t d, std::size_t T);

  // Proximal weight in effect at the given 1-based round.
  double eta_at(std::size_t round) const;

  // Throws InvalidHyperparameterError on any broken invariant.
  void validate() const;
};

// Full learner state. `u` is the shared pattern as the server sees it;
// `u_local[k]` is the copy worker k uses in its next w-update. In the
// centralized protocol every u_local equals u.
struct ModelState {
  std::vector<Vector> w;
  std::vector<Vector> v;
  std::vector<Vector> z;
  Vector u;
  std::vector<Vector> u_local;

  static ModelState zeros(std::size_t K, std::size_t d);

  std::size_t num_tasks() const { return w.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(u.size()); }

  // d x K matrix whose k-th column is v[k].
  Matrix v_matrix() const;

  // Throws DimensionError on size mismatch and Error on non-finite entries.
  void validate(std::size_t K, std::size_t d) const;

  bool operator==(const ModelState& other) const;
};

std::string describe_dims(std::size_t a, std::size_t b);

}  // namespace omtl

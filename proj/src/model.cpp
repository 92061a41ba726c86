#include "omtl/model.hpp"

#include <algorithm>
#include <cmath>

#include "omtl/errors.hpp"

namespace omtl {

Label label_from_int(int value) {
  if (value == 1) return Label::kPositive;
  if (value == -1) return Label::kNegative;
  throw LabelError("label must be -1 or +1, got " + std::to_string(value), 0);
}

std::string describe_dims(std::size_t a, std::size_t b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

Hyperparameters Hyperparameters::defaults(std::size_t K, std::size_t d, std::size_t T) {
  Hyperparameters hp;
  hp.K = K;
  hp.d = d;
  hp.T = T;
  hp.eta = std::sqrt(static_cast<double>(T));
  return hp;
}

double Hyperparameters::eta_at(std::size_t round) const {
  if (eta_schedule == EtaSchedule::kSqrtRound) {
    return std::sqrt(static_cast<double>(std::max<std::size_t>(round, 1)));
  }
  return eta;
}

void Hyperparameters::validate() const {
  auto fail = [](const std::string& what) { throw InvalidHyperparameterError(what); };
  if (!(rho > 0.0)) fail("rho must be positive");
  if (!(eta >= 0.0)) fail("eta must be nonnegative");
  if (!(lambda1 > 0.0)) fail("lambda1 must be positive");
  if (!(lambda2 > 0.0)) fail("lambda2 must be positive");
  if (!(lambda3 >= 0.0)) fail("lambda3 must be nonnegative");
  if (!(lambda4 >= 0.0)) fail("lambda4 must be nonnegative");
  if (K == 0) fail("K must be positive");
  if (d == 0) fail("d must be positive");
  if (!(eps_inv >= 0.0)) fail("eps_inv must be nonnegative");
  if (!(eps_tr > 0.0)) fail("eps_tr must be positive");
}

ModelState ModelState::zeros(std::size_t K, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ModelState s;
  s.w.assign(K, Vector::Zero(n));
  s.v.assign(K, Vector::Zero(n));
  s.z.assign(K, Vector::Zero(n));
  s.u = Vector::Zero(n);
  s.u_local.assign(K, Vector::Zero(n));
  return s;
}

Matrix ModelState::v_matrix() const {
  Matrix m(u.size(), static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = v[k];
  return m;
}

void ModelState::validate(std::size_t K, std::size_t d) const {
  if (w.size() != K || v.size() != K || z.size() != K || u_local.size() != K) {
    throw DimensionError("model state task count mismatch (expected " + std::to_string(K) + ")");
  }
  auto check = [d](const Vector& x, const char* name) {
    if (static_cast<std::size_t>(x.size()) != d) {
      throw DimensionError(std::string(name) + " has dimension " +
                           describe_dims(static_cast<std::size_t>(x.size()), d));
    }
    if (!x.allFinite()) throw Error(std::string(name) + " has non-finite entries");
  };
  check(u, "u");
  for (std::size_t k = 0; k < K; ++k) {
    check(w[k], "w");
    check(v[k], "v");
    check(z[k], "z");
    check(u_local[k], "u_local");
  }
}

bool ModelState::operator==(const ModelState& other) const {
  auto same = [](const std::vector<Vector>& a, const std::vector<Vector>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].size() != b[i].size() || a[i] != b[i]) return false;
    }
    return true;
  };
  return same(w, other.w) && same(v, other.v) && same(z, other.z) &&
         same(u_local, other.u_local) && u.size() == other.u.size() && u == other.u;
}

namespace {

void check_same_length(const Vector& w, const Vector& x) {
  if (w.size() != x.size()) {
    throw DimensionError("weight/feature length mismatch: " +
                         describe_dims(static_cast<std::size_t>(w.size()),
                                       static_cast<std::size_t>(x.size())));
  }
}

Matrix columns(std::span<const Vector> cols, Eigen::Index d) {
  Matrix m(d, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = cols[k];
  return m;
}

}  // namespace

Label predict(const Vector& w, const Vector& x) {
  check_same_length(w, x);
  return w.dot(x) >= 0.0 ? Label::kPositive : Label::kNegative;
}

double hinge_loss(const Vector& w, const Vector& x, Label y) {
  check_same_length(w, x);
  return std::max(0.0, 1.0 - to_double(y) * w.dot(x));
}

Vector hinge_subgradient(const Vector& w, const Vector& x, Label y) {
  check_same_length(w, x);
  const double yd = to_double(y);
  if (yd * w.dot(x) < 1.0) return -yd * x;
  return Vector::Zero(x.size());
}

double evaluate_objective(const ModelState& state, const RelationshipMatrix& omega,
                          std::span<const Sample> samples, const Hyperparameters& hp) {
  const std::size_t K = state.num_tasks();
  if (samples.size() != K || omega.size() != K) {
    throw DimensionError("objective: task count mismatch");
  }
  state.validate(K, state.dim());

  double value = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    value += hinge_loss(state.w[k], samples[k].features, samples[k].label);
  }
  double v_norms = 0.0;
  for (const auto& vk : state.v) v_norms += vk.squaredNorm();
  value += 0.5 * hp.lambda1 * v_norms;
  value += 0.5 * hp.lambda2 * state.u.squaredNorm();

  const Matrix v = columns(state.v, state.u.size());
  value += 0.5 * hp.lambda3 * (v * v.transpose()).trace();
  const SymMatrix omega_inv = regularized_inverse(omega.omega(), hp.eps_inv);
  value += 0.5 * hp.lambda4 * (v * omega_inv.matrix() * v.transpose()).trace();
  return value;
}

double evaluate_lagrangian(const ModelState& state, const RelationshipMatrix& omega,
                           std::span<const Sample> samples, std::span<const Vector> w_prev,
                           const Hyperparameters& hp) {
  const std::size_t K = state.num_tasks();
  if (w_prev.size() != K) throw DimensionError("lagrangian: w_prev task count mismatch");
  double value = evaluate_objective(state, omega, samples, hp);
  double bregman = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (w_prev[k].size() != state.w[k].size()) {
      throw DimensionError("lagrangian: w_prev dimension mismatch");
    }
    const Vector residual = state.w[k] - state.u - state.v[k];
    value += state.z[k].dot(residual) + 0.5 * hp.rho * residual.squaredNorm();
    bregman += 0.5 * (w_prev[k] - state.w[k]).squaredNorm();
  }
  return value + hp.eta * bregman;
}

}  // namespace omtl

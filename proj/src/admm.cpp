#include "omtl/admm.hpp"

#include <algorithm>

#include "omtl/errors.hpp"

namespace omtl {

namespace {

void require_dim(const Vector& x, Eigen::Index d, const char* name) {
  if (x.size() != d) {
    throw DimensionError(std::string(name) + " has dimension " +
                         describe_dims(static_cast<std::size_t>(x.size()),
                                       static_cast<std::size_t>(d)));
  }
}

}  // namespace

Vector update_w(const WorkerSlice& slice, const Vector& u, const Vector& grad,
                const Hyperparameters& hp) {
  const Eigen::Index d = slice.w.size();
  require_dim(slice.v, d, "v");
  require_dim(slice.z, d, "z");
  require_dim(u, d, "u");
  require_dim(grad, d, "grad");
  const double denom = hp.rho + hp.eta;
  if (denom == 0.0) throw DegenerateStepError("rho + eta must be nonzero");
  return (hp.eta * slice.w + hp.rho * (u + slice.v) - grad - slice.z) / denom;
}

Vector omega_inv_column(const SymMatrix& omega_inv, std::size_t k) {
  const std::size_t K = omega_inv.size();
  if (k >= K) throw DimensionError("task index out of range");
  Vector col(static_cast<Eigen::Index>(K));
  for (std::size_t j = 0; j < K; ++j) {
    col(static_cast<Eigen::Index>(j)) = omega_inv(j, k) + omega_inv(k, j);
  }
  return col;
}

Vector relationship_term(const Matrix& v_matrix, const Vector& inv_column, double lambda4) {
  const Eigen::Index K = v_matrix.cols();
  if (inv_column.size() != K) {
    throw DimensionError("omega column has " + std::to_string(inv_column.size()) +
                         " entries but V has " + std::to_string(K) + " columns");
  }
  Vector acc = Vector::Zero(v_matrix.rows());
  if (lambda4 == 0.0) return acc;
  // Each entry sums its K products in sorted order, so the result depends
  // only on the multiset of (column, weight) pairs and not on task order.
  std::vector<double> terms(static_cast<std::size_t>(K));
  for (Eigen::Index r = 0; r < v_matrix.rows(); ++r) {
    for (Eigen::Index j = 0; j < K; ++j) {
      terms[static_cast<std::size_t>(j)] = v_matrix(r, j) * inv_column(j);
    }
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    acc(r) = s;
  }
  return (0.5 * lambda4) * acc;
}

Vector update_v_from_column(const WorkerSlice& slice, const Vector& w_new,
                            const Matrix& v_matrix, const Vector& inv_column,
                            const Hyperparameters& hp) {
  const Eigen::Index d = slice.w.size();
  require_dim(slice.z, d, "z");
  require_dim(w_new, d, "w_new");
  if (v_matrix.rows() != d) throw DimensionError("V row count does not match d");
  const double l13 = hp.lambda1 + hp.lambda3;
  const double K = static_cast<double>(hp.K);
  const double denom = hp.lambda2 * (l13 + hp.rho) + hp.rho * K * l13;
  if (!(denom > 0.0)) throw InvalidHyperparameterError("v-update denominator must be positive");
  Vector out = hp.lambda2 * (slice.z + hp.rho * w_new) / denom;
  if (hp.lambda4 != 0.0) out += relationship_term(v_matrix, inv_column, hp.lambda4);
  return out;
}

Vector update_v(const WorkerSlice& slice, const Vector& w_new, const Matrix& v_matrix,
                const SymMatrix& omega_inv, const Hyperparameters& hp) {
  if (static_cast<Eigen::Index>(omega_inv.size()) != v_matrix.cols()) {
    throw DimensionError("omega_inv size does not match the column count of V");
  }
  return update_v_from_column(slice, w_new, v_matrix,
                              omega_inv_column(omega_inv, slice.task_index), hp);
}

Vector update_u(std::span<const Vector> w_new, std::span<const Vector> z,
                const Hyperparameters& hp) {
  if (w_new.empty() || w_new.size() != z.size()) {
    throw DimensionError("u-update needs equally many (nonzero) w and z vectors");
  }
  const Eigen::Index d = w_new.front().size();
  Vector sum = Vector::Zero(d);
  for (std::size_t k = 0; k < w_new.size(); ++k) {
    require_dim(w_new[k], d, "w_new");
    require_dim(z[k], d, "z");
    sum += z[k] + hp.rho * w_new[k];
  }
  const double l13 = hp.lambda1 + hp.lambda3;
  const double K = static_cast<double>(w_new.size());
  const double denom = l13 * (hp.lambda2 + hp.rho * K) + hp.lambda2 * hp.rho;
  if (!(denom > 0.0)) throw InvalidHyperparameterError("u-update denominator must be positive");
  return l13 * sum / denom;
}

Vector update_z(const WorkerSlice& slice, const Vector& w_new, const Vector& u_new,
                const Vector& v_new, const Hyperparameters& hp) {
  const Eigen::Index d = slice.z.size();
  require_dim(w_new, d, "w_new");
  require_dim(u_new, d, "u_new");
  require_dim(v_new, d, "v_new");
  return slice.z + hp.rho * (w_new - u_new - v_new);
}

RelationshipMatrix update_omega(const Matrix& v_matrix, const RelationshipMatrix& previous,
                                double eps_tr) {
  if (static_cast<std::size_t>(v_matrix.cols()) != previous.size()) {
    throw DimensionError("V column count does not match omega");
  }
  const SymMatrix root = psd_sqrt(gram(v_matrix));
  const double tr = trace(root);
  if (tr < eps_tr) return previous;
  return RelationshipMatrix(SymMatrix(root.matrix() / tr));
}

}  // namespace omtl

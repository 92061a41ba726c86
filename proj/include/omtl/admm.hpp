#pragma once

#include <span>

#include "omtl/symmat.hpp"
#include "omtl/types.hpp"

namespace omtl {

// Per-worker view of the model state. Holds references; the caller keeps the
// underlying vectors alive for the duration of the call.
struct WorkerSlice {
  const Vector& w;
  const Vector& v;
  const Vector& z;
  std::size_t task_index;
};

// Linearized proximal w-step:
//   (eta w + rho (u + v) - grad - z) / (rho + eta)
Vector update_w(const WorkerSlice& slice, const Vector& u, const Vector& grad,
                const Hyperparameters& hp);

// k-th column of Omega^{-1} + Omega^{-T}: entry j is inv(j, k) + inv(k, j).
Vector omega_inv_column(const SymMatrix& omega_inv, std::size_t k);

// (lambda4 / 2) [V Omega^{-1} + V Omega^{-T}]_{:, k} given the column from
// omega_inv_column. Entries are summed in sorted order of their terms.
// Exactly zero when lambda4 == 0.
Vector relationship_term(const Matrix& v_matrix, const Vector& inv_column, double lambda4);

// v-step as a ratio term plus the relationship term:
//   lambda2 (z + rho w_new) / (lambda2 (l1 + l3 + rho) + rho K (l1 + l3))
//   + relationship_term(V, Omega^{-1}, k)
// K is taken from hp.K.
Vector update_v(const WorkerSlice& slice, const Vector& w_new, const Matrix& v_matrix,
                const SymMatrix& omega_inv, const Hyperparameters& hp);

// Same step for a worker that only holds its column of Omega^{-1} + Omega^{-T}.
Vector update_v_from_column(const WorkerSlice& slice, const Vector& w_new,
                            const Matrix& v_matrix, const Vector& inv_column,
                            const Hyperparameters& hp);

// Shared-pattern step over the given tasks (K = w_new.size()):
//   (l1 + l3) sum_k (z^k + rho w_new^k) / ((l1 + l3)(lambda2 + rho K) + lambda2 rho)
// The sum runs in list order.
Vector update_u(std::span<const Vector> w_new, std::span<const Vector> z,
                const Hyperparameters& hp);

// Dual ascent: z + rho (w_new - u_new - v_new).
Vector update_z(const WorkerSlice& slice, const Vector& w_new, const Vector& u_new,
                const Vector& v_new, const Hyperparameters& hp);

// Omega = (V^T V)^{1/2} / tr((V^T V)^{1/2}); returns `previous` untouched when
// the trace is below eps_tr.
RelationshipMatrix update_omega(const Matrix& v_matrix, const RelationshipMatrix& previous,
                                double eps_tr);

}  // namespace omtl

#pragma once

#include <span>

#include "omtl/symmat.hpp"
#include "omtl/types.hpp"

namespace omtl {

// sign(w . x) with sign(0) = +1.
Label predict(const Vector& w, const Vector& x);

double hinge_loss(const Vector& w, const Vector& x, Label y);

// -y x while the margin y (w . x) is below 1, otherwise zero (including the
// kink at margin exactly 1).
Vector hinge_subgradient(const Vector& w, const Vector& x, Label y);

// Regularized loss with the relationship term evaluated through the
// eps_inv-regularized inverse of omega. Diagnostic only: w is taken from the
// state as-is.
double evaluate_objective(const ModelState& state, const RelationshipMatrix& omega,
                          std::span<const Sample> samples, const Hyperparameters& hp);

// Augmented Lagrangian with Bregman term (1/2) sum_k ||w_prev^k - w^k||^2
// weighted by hp.eta.
double evaluate_lagrangian(const ModelState& state, const RelationshipMatrix& omega,
                           std::span<const Sample> samples,
                           std::span<const Vector> w_prev, const Hyperparameters& hp);

}  // namespace omtl

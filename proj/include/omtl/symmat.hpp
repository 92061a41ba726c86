#pragma once

#include "omtl/types.hpp"

namespace omtl {

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPsdClamp = -1e-8;

// Dense symmetric K x K matrix. Construction rejects inputs whose entries
// differ from their transpose by more than kSymmetryTolerance.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix entries);

  static SymMatrix identity(std::size_t K);
  static SymMatrix zero(std::size_t K);

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  bool operator==(const SymMatrix& other) const;

 private:
  Matrix m_;
};

// V^T V with (i, j) and (j, i) filled from one dot product, so the result is
// exactly symmetric.
SymMatrix gram(const Matrix& v);

// Principal square root through a symmetric eigendecomposition. Eigenvalues in
// [kPsdClamp, 0) are clamped to zero; anything below raises NotPsdError.
SymMatrix psd_sqrt(const SymMatrix& a);

// (a + eps_inv I)^{-1} through a symmetric eigendecomposition.
SymMatrix regularized_inverse(const SymMatrix& a, double eps_inv);

double trace(const SymMatrix& a);

// Smallest eigenvalue; used by validation and tests.
double min_eigenvalue(const SymMatrix& a);

// Task relationship matrix: symmetric PSD, unit trace when produced by the
// omega update.
class RelationshipMatrix {
 public:
  explicit RelationshipMatrix(SymMatrix omega);

  // I_K / K: all tasks start out unrelated.
  static RelationshipMatrix initial(std::size_t K);

  const SymMatrix& omega() const { return omega_; }
  std::size_t size() const { return omega_.size(); }

  bool operator==(const RelationshipMatrix& other) const = default;

 private:
  SymMatrix omega_;
};

}  // namespace omtl

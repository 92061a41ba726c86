#include "omtl/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "omtl/errors.hpp"

namespace omtl {

namespace {

void require_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw SymmetryError("matrix is not square (" + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ")");
  }
  if (m.rows() == 0) throw DimensionError("matrix must be at least 1x1");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (!(std::abs(m(i, j) - m(j, i)) <= kSymmetryTolerance)) {
        throw SymmetryError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      }
    }
  }
}

// Q diag(f(lambda)) Q^T, with the upper triangle mirrored into the lower one.
template <typename F>
Matrix spectral_map(const Eigen::SelfAdjointEigenSolver<Matrix>& es, F&& f) {
  const Vector mapped = es.eigenvalues().unaryExpr(f);
  Matrix out = es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < out.cols(); ++j) out(j, i) = out(i, j);
  }
  return out;
}

Eigen::SelfAdjointEigenSolver<Matrix> decompose(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed");
  return es;
}

// Indices whose rows are bitwise equal. Such a matrix is E B E^T with E the
// group indicator, so with Q = E D^{-1/2} (D = group sizes) it equals
// Q C Q^T for C = D^{1/2} B D^{1/2}, and
//   f(A) = Q f(C) Q^T + f(0) (I - Q Q^T).
// Working on C keeps duplicated indices exactly interchangeable.
struct RowGroups {
  std::vector<Eigen::Index> group_of;
  std::vector<Eigen::Index> representative;
  std::vector<double> size;
  bool trivial() const { return representative.size() == group_of.size(); }
};

RowGroups duplicate_rows(const Matrix& a) {
  const Eigen::Index K = a.rows();
  RowGroups g;
  g.group_of.assign(static_cast<std::size_t>(K), -1);
  for (Eigen::Index i = 0; i < K; ++i) {
    if (g.group_of[static_cast<std::size_t>(i)] >= 0) continue;
    const auto id = static_cast<Eigen::Index>(g.representative.size());
    g.representative.push_back(i);
    g.size.push_back(0.0);
    for (Eigen::Index j = i; j < K; ++j) {
      if (g.group_of[static_cast<std::size_t>(j)] < 0 && a.row(j) == a.row(i)) {
        g.group_of[static_cast<std::size_t>(j)] = id;
        g.size.back() += 1.0;
      }
    }
  }
  return g;
}

Matrix reduced_core(const Matrix& a, const RowGroups& g) {
  const auto m = static_cast<Eigen::Index>(g.representative.size());
  Matrix c(m, m);
  for (Eigen::Index p = 0; p < m; ++p) {
    for (Eigen::Index q = p; q < m; ++q) {
      const double scale = std::sqrt(g.size[static_cast<std::size_t>(p)] *
                                     g.size[static_cast<std::size_t>(q)]);
      c(p, q) = a(g.representative[static_cast<std::size_t>(p)],
                  g.representative[static_cast<std::size_t>(q)]) *
                scale;
      c(q, p) = c(p, q);
    }
  }
  return c;
}

template <typename F>
Matrix expand(const Matrix& fc, const RowGroups& g, double f0) {
  const auto K = static_cast<Eigen::Index>(g.group_of.size());
  Matrix out(K, K);
  for (Eigen::Index i = 0; i < K; ++i) {
    const Eigen::Index gi = g.group_of[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i; j < K; ++j) {
      const Eigen::Index gj = g.group_of[static_cast<std::size_t>(j)];
      const double ni = g.size[static_cast<std::size_t>(gi)];
      const double nj = g.size[static_cast<std::size_t>(gj)];
      double x = fc(gi, gj) / std::sqrt(ni * nj);
      if (gi == gj && ni > 1.0) x += f0 * ((i == j ? 1.0 : 0.0) - 1.0 / ni);
      out(i, j) = x;
      out(j, i) = x;
    }
  }
  return out;
}

// f(A) for a symmetric A; `validate` sees the eigenvalues first.
template <typename F, typename Check>
Matrix matrix_function(const Matrix& a, F&& f, Check&& validate) {
  const RowGroups g = duplicate_rows(a);
  if (g.trivial()) {
    const auto es = decompose(a);
    validate(es.eigenvalues().minCoeff());
    return spectral_map(es, f);
  }
  const auto es = decompose(reduced_core(a, g));
  validate(es.eigenvalues().minCoeff());
  return expand<F>(spectral_map(es, f), g, f(0.0));
}

}  // namespace

SymMatrix::SymMatrix(Matrix entries) : m_(std::move(entries)) { require_symmetric(m_); }

SymMatrix SymMatrix::identity(std::size_t K) {
  const auto n = static_cast<Eigen::Index>(K);
  return SymMatrix(Matrix::Identity(n, n));
}

SymMatrix SymMatrix::zero(std::size_t K) {
  const auto n = static_cast<Eigen::Index>(K);
  return SymMatrix(Matrix::Zero(n, n));
}

bool SymMatrix::operator==(const SymMatrix& other) const {
  return m_.rows() == other.m_.rows() && m_ == other.m_;
}

SymMatrix gram(const Matrix& v) {
  const Eigen::Index K = v.cols();
  Matrix a(K, K);
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = i; j < K; ++j) {
      double s = 0.0;
      for (Eigen::Index r = 0; r < v.rows(); ++r) s += v(r, i) * v(r, j);
      a(i, j) = s;
      a(j, i) = s;
    }
  }
  return SymMatrix(std::move(a));
}

SymMatrix psd_sqrt(const SymMatrix& a) {
  // Eigenvalues within round-off of zero are treated as zero; their square
  // roots would otherwise surface as noise of order sqrt(eps |A|).
  const double floor = static_cast<double>(a.size()) * std::numeric_limits<double>::epsilon() *
                       a.matrix().cwiseAbs().maxCoeff();
  return SymMatrix(matrix_function(
      a.matrix(), [floor](double lambda) { return lambda <= floor ? 0.0 : std::sqrt(lambda); },
      [](double smallest) {
        if (smallest < kPsdClamp) {
          throw NotPsdError("matrix has eigenvalue " + std::to_string(smallest) + " below " +
                            std::to_string(kPsdClamp));
        }
      }));
}

SymMatrix regularized_inverse(const SymMatrix& a, double eps_inv) {
  return SymMatrix(matrix_function(
      a.matrix(), [eps_inv](double lambda) { return 1.0 / (lambda + eps_inv); }, [](double) {}));
}

double trace(const SymMatrix& a) { return a.matrix().trace(); }

double min_eigenvalue(const SymMatrix& a) {
  const RowGroups g = duplicate_rows(a.matrix());
  if (g.trivial()) return decompose(a.matrix()).eigenvalues().minCoeff();
  return std::min(decompose(reduced_core(a.matrix(), g)).eigenvalues().minCoeff(), 0.0);
}

RelationshipMatrix::RelationshipMatrix(SymMatrix omega) : omega_(std::move(omega)) {
  const double smallest = min_eigenvalue(omega_);
  if (smallest < kPsdClamp) {
    throw NotPsdError("relationship matrix has eigenvalue " + std::to_string(smallest));
  }
}

RelationshipMatrix RelationshipMatrix::initial(std::size_t K) {
  const auto n = static_cast<Eigen::Index>(K);
  return RelationshipMatrix(SymMatrix(Matrix::Identity(n, n) / static_cast<double>(K)));
}

}  // namespace omtl

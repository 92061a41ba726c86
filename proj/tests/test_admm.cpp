#include <doctest.h>

#include <cmath>
#include <numeric>

#include "omtl/admm.hpp"
#include "omtl/errors.hpp"
#include "test_util.hpp"

using namespace omtl;
using omtl::testing::vec;

TEST_CASE("update_w") {
  auto hp = testing::small_hp(1, 2, 0.0);
  const Vector w = vec({3, -1}), v = vec({0.5, 0.5}), z = Vector::Zero(2), u = vec({1, 2});
  // eta = 0, z = 0, grad = 0: pure consensus pull.
  CHECK((update_w({w, v, z, 0}, u, Vector::Zero(2), hp) - (u + v)).norm() < 1e-15);

  // d = 1 scalar substitution: (1.0*0.5 + 0.1*0.3 + 1 - 0.05) / 1.1.
  hp = testing::small_hp(1, 1, 1.0);
  const Vector w1 = vec({0.5}), v1 = vec({0.1}), z1 = vec({0.05});
  const Vector got = update_w({w1, v1, z1, 0}, vec({0.2}), vec({-1.0}), hp);
  CHECK(got(0) == doctest::Approx(1.48 / 1.1).epsilon(1e-14));
  CHECK(got(0) == doctest::Approx(1.34545).epsilon(1e-5));

  // Fixed point when u + v = w with no gradient and no dual.
  const Vector wf = vec({0.7, -0.2});
  CHECK((update_w({wf, vec({0.2, 0.1}), Vector::Zero(2), 0}, vec({0.5, -0.3}), Vector::Zero(2), hp) - wf)
            .norm() < 1e-15);

  CHECK_THROWS_AS(update_w({w, v, z, 0}, vec({1}), Vector::Zero(2), hp), DimensionError);
  Hyperparameters degenerate = hp;
  degenerate.rho = 0.0;
  degenerate.eta = 0.0;
  CHECK_THROWS_AS(update_w({w, v, z, 0}, u, Vector::Zero(2), degenerate), DegenerateStepError);
}

TEST_CASE("update_w step is inversely proportional to rho + eta") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto hp = testing::small_hp(1, 5, rng.uniform(0.0, 50.0));
    const Vector w = testing::random_vector(rng, 5), v = testing::random_vector(rng, 5);
    const Vector z = testing::random_vector(rng, 5), u = testing::random_vector(rng, 5);
    const Vector g = testing::random_vector(rng, 5);
    const double step = (update_w({w, v, z, 0}, u, g, hp) - w).norm();
    auto doubled = hp;
    doubled.eta = 2 * hp.eta + hp.rho;  // rho + eta doubles, rho unchanged
    const double half = (update_w({w, v, z, 0}, u, g, doubled) - w).norm();
    CHECK(half == doctest::Approx(step / 2).epsilon(1e-10));
  }
}

TEST_CASE("update_v") {
  auto hp = testing::small_hp(3, 2);
  const Vector zero = Vector::Zero(2);
  const Matrix V = Matrix::Zero(2, 3);
  const SymMatrix inv = SymMatrix::identity(3);
  CHECK(update_v({zero, zero, zero, 1}, zero, V, inv, hp) == zero);

  // d = 1, K = 1: 0.1 (0 + 0.1) / (0.1 * 0.12 + 0.1 * 0.02) + 0.005 (0.5 + 0.5).
  hp = testing::small_hp(1, 1);
  const Vector w0 = vec({0.0}), v0 = vec({0.5}), z0 = vec({0.0});
  Matrix V1(1, 1);
  V1 << 0.5;
  const Vector got = update_v({w0, v0, z0, 0}, vec({1.0}), V1, SymMatrix::identity(1), hp);
  CHECK(got(0) == doctest::Approx(0.01 / 0.014 + 0.005).epsilon(1e-14));
  CHECK(got(0) == doctest::Approx(0.71929).epsilon(1e-5));

  // lambda4 = 0 keeps only the ratio term, bit for bit.
  hp.lambda4 = 0.0;
  const Vector ratio_only = update_v({w0, v0, z0, 0}, vec({1.0}), V1, SymMatrix::identity(1), hp);
  CHECK(ratio_only(0) == 0.1 * (0.0 + 0.1 * 1.0) / (0.1 * (0.02 + 0.1) + 0.1 * 1 * 0.02));
}

TEST_CASE("relationship term pieces") {
  Matrix om(2, 2);
  om << 2, 0.5, 0.5, 1;
  const SymMatrix inv{om};
  CHECK(omega_inv_column(inv, 0) == vec({4, 1}));
  CHECK(omega_inv_column(inv, 1) == vec({1, 2}));
  Matrix V(1, 2);
  V << 1, 3;
  CHECK(relationship_term(V, omega_inv_column(inv, 0), 0.2)(0) == doctest::Approx(0.1 * (4 + 3)));
  CHECK(relationship_term(V, omega_inv_column(inv, 0), 0.0)(0) == 0.0);
  CHECK_THROWS_AS(relationship_term(V, vec({1, 2, 3}), 0.2), DimensionError);
  CHECK_THROWS_AS(omega_inv_column(inv, 2), DimensionError);
}

TEST_CASE("update_u") {
  auto hp = testing::small_hp(2, 1);
  const std::vector<Vector> zeros(3, Vector::Zero(4));
  CHECK(update_u(zeros, zeros, hp) == Vector::Zero(4));

  const std::vector<Vector> w{vec({1}), vec({1})};
  const std::vector<Vector> z{vec({0.1}), vec({-0.1})};
  CHECK(update_u(w, z, hp)(0) == doctest::Approx(0.25).epsilon(1e-14));

  Rng rng(6);
  std::vector<Vector> wr, zr, wc, zc;
  for (int k = 0; k < 4; ++k) {
    wr.push_back(testing::random_vector(rng, 3));
    zr.push_back(testing::random_vector(rng, 3));
    wc.push_back(2.5 * wr.back());
    zc.push_back(2.5 * zr.back());
  }
  CHECK((update_u(wc, zc, hp) - 2.5 * update_u(wr, zr, hp)).norm() < 1e-14);

  CHECK_THROWS_AS(update_u(std::vector<Vector>{}, std::vector<Vector>{}, hp), DimensionError);
  CHECK_THROWS_AS(update_u(w, std::vector<Vector>{vec({0})}, hp), DimensionError);
}

TEST_CASE("update_z") {
  auto hp = testing::small_hp(1, 2);
  const Vector z = vec({0.3, -0.4});
  const Vector zero = Vector::Zero(2);
  const Vector u = vec({1, 2}), v = vec({0.5, -1});
  CHECK(update_z({zero, zero, z, 0}, u + v, u, v, hp) == z);

  hp = testing::small_hp(1, 1);
  const Vector z0 = vec({0.0}), d0 = vec({0.0});
  CHECK(update_z({d0, d0, z0, 0}, vec({0.5}), vec({0.0}), vec({0.0}), hp)(0) ==
        doctest::Approx(0.05).epsilon(1e-15));

  const Vector w = vec({0.9}), un = vec({0.1}), vn = vec({0.3});
  const Vector once = update_z({d0, d0, z0, 0}, w, un, vn, hp);
  const Vector twice = update_z({d0, d0, once, 0}, w, un, vn, hp);
  CHECK(twice(0) == doctest::Approx(2 * hp.rho * 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(update_z({d0, d0, z0, 0}, vec({1, 2}), un, vn, hp), DimensionError);
}

TEST_CASE("update_omega closed-form cases") {
  const auto prev = RelationshipMatrix::initial(3);
  // Orthonormal columns: A = I, Omega = I / K.
  Matrix q = Matrix::Zero(5, 3);
  q(0, 0) = 1;
  q(2, 1) = 1;
  q(4, 2) = 1;
  const auto om = update_omega(q, prev, 1e-10);
  CHECK(testing::frobenius_relative(om.omega().matrix(), Matrix::Identity(3, 3) / 3.0) < 1e-14);

  // Guard branch.
  Matrix custom(3, 3);
  custom << 0.5, 0.1, 0, 0.1, 0.3, 0, 0, 0, 0.2;
  const RelationshipMatrix held{SymMatrix(custom)};
  CHECK(update_omega(Matrix::Zero(4, 3), held, 1e-10) == held);

  Matrix d(2, 2);
  d << 1, 0, 0, 2;
  const auto diag = update_omega(d, RelationshipMatrix::initial(2), 1e-10);
  CHECK(diag.omega()(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(diag.omega()(1, 1) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(std::abs(diag.omega()(0, 1)) < 1e-15);

  CHECK_THROWS_AS(update_omega(Matrix::Zero(2, 4), RelationshipMatrix::initial(3), 1e-10),
                  DimensionError);
}

TEST_CASE("update_omega output is a trace-one PSD matrix") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t K = 1 + rng.below(8);
    const Matrix V = testing::random_matrix(rng, 1 + rng.below(16), K);
    const auto om = update_omega(V, RelationshipMatrix::initial(K), 1e-10);
    CHECK(std::abs(trace(om.omega()) - 1.0) < 1e-10);
    CHECK(min_eigenvalue(om.omega()) >= -1e-10);
    const Matrix& m = om.omega().matrix();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("identical v columns share omega structure") {
  Rng rng(13);
  Matrix V = testing::random_matrix(rng, 6, 4);
  V.col(2) = V.col(0);
  const Matrix m = update_omega(V, RelationshipMatrix::initial(4), 1e-10).omega().matrix();
  CHECK(m(0, 0) == doctest::Approx(m(2, 2)).epsilon(1e-10));
  CHECK(m(0, 2) == doctest::Approx(m(0, 0)).epsilon(1e-10));
}

TEST_CASE("kernels are equivariant under task permutation") {
  Rng rng(14);
  const std::size_t K = 4, d = 3;
  auto hp = testing::small_hp(K, d, 2.0);
  std::vector<Vector> w, v, z;
  for (std::size_t k = 0; k < K; ++k) {
    w.push_back(testing::random_vector(rng, d));
    v.push_back(testing::random_vector(rng, d));
    z.push_back(testing::random_vector(rng, d));
  }
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  Matrix V(d, K), PV(d, K);
  for (std::size_t k = 0; k < K; ++k) {
    V.col(k) = v[k];
    PV.col(k) = v[perm[k]];
  }
  const Matrix b = testing::random_matrix(rng, K, K);
  Matrix inv = b.transpose() * b + Matrix::Identity(K, K);
  Matrix pinv(K, K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) pinv(i, j) = inv(perm[i], perm[j]);
  const SymMatrix S{inv}, PS{pinv};

  std::vector<Vector> pw, pz;
  for (std::size_t k = 0; k < K; ++k) {
    pw.push_back(w[perm[k]]);
    pz.push_back(z[perm[k]]);
  }
  CHECK((update_u(pw, pz, hp) - update_u(w, z, hp)).norm() < 1e-14);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t src = perm[k];
    CHECK((update_v({pw[k], PV.col(k), pz[k], k}, pw[k], PV, PS, hp) -
           update_v({w[src], v[src], z[src], src}, w[src], V, S, hp))
              .norm() < 1e-13);
  }
  const Matrix om = update_omega(V, RelationshipMatrix::initial(K), 1e-10).omega().matrix();
  const Matrix pom = update_omega(PV, RelationshipMatrix::initial(K), 1e-10).omega().matrix();
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) CHECK(std::abs(pom(i, j) - om(perm[i], perm[j])) < 1e-12);
}

TEST_CASE("relationship term ignores the order of tasks exactly") {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix V = testing::random_matrix(rng, 6, 5);
    const Vector c = testing::random_vector(rng, 5);
    const std::vector<Eigen::Index> perm{3, 0, 4, 2, 1};
    Matrix PV(6, 5);
    Vector pc(5);
    for (Eigen::Index j = 0; j < 5; ++j) {
      PV.col(j) = V.col(perm[static_cast<std::size_t>(j)]);
      pc(j) = c(perm[static_cast<std::size_t>(j)]);
    }
    CHECK(relationship_term(PV, pc, 0.01) == relationship_term(V, c, 0.01));
  }
}

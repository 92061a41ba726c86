#pragma once

// Hand-written scalar trace of one centralized round for K = 2, d = 1. Uses
// only arithmetic on doubles so it stays independent of the vectorized
// kernels it checks.

#include <cmath>

#include "omtl/types.hpp"

namespace omtl::testing {

struct ScalarRound {
  double w[2], v[2], z[2], u;
  double omega[2][2];
  double x[2];
  int y[2];
};

struct ScalarRoundOut {
  double w[2], v[2], z[2], u;
  double omega[2][2];
  double loss[2];
  int prediction[2];
};

inline ScalarRoundOut scalar_round(const ScalarRound& in, const Hyperparameters& hp) {
  ScalarRoundOut out{};
  const double rho = hp.rho, eta = hp.eta;
  const double l13 = hp.lambda1 + hp.lambda3;
  for (int k = 0; k < 2; ++k) {
    const double margin = in.y[k] * in.w[k] * in.x[k];
    out.prediction[k] = in.w[k] * in.x[k] >= 0 ? 1 : -1;
    out.loss[k] = margin < 1 ? 1 - margin : 0.0;
    const double g = margin < 1 ? -in.y[k] * in.x[k] : 0.0;
    out.w[k] = (eta * in.w[k] + rho * (in.u + in.v[k]) - g - in.z[k]) / (rho + eta);
  }
  out.u = l13 * ((in.z[0] + rho * out.w[0]) + (in.z[1] + rho * out.w[1])) /
          (l13 * (hp.lambda2 + rho * 2) + hp.lambda2 * rho);

  const double a = in.omega[0][0] + hp.eps_inv, b = in.omega[0][1];
  const double c = in.omega[1][0], d = in.omega[1][1] + hp.eps_inv;
  const double det = a * d - b * c;
  const double inv[2][2] = {{d / det, -b / det}, {-c / det, a / det}};
  const double v_denom = hp.lambda2 * (l13 + rho) + rho * 2 * l13;
  for (int k = 0; k < 2; ++k) {
    double rel = 0.0;
    for (int j = 0; j < 2; ++j) rel += in.v[j] * (inv[j][k] + inv[k][j]);
    out.v[k] = hp.lambda2 * (in.z[k] + rho * out.w[k]) / v_denom + hp.lambda4 / 2 * rel;
    out.z[k] = in.z[k] + rho * (out.w[k] - out.u - out.v[k]);
  }

  // For d = 1, V^T V = v v^T has root v v^T / |v| and trace |v|.
  const double norm_sq = out.v[0] * out.v[0] + out.v[1] * out.v[1];
  if (std::sqrt(norm_sq) < hp.eps_tr) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.omega[i][j] = in.omega[i][j];
  } else {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.omega[i][j] = out.v[i] * out.v[j] / norm_sq;
  }
  return out;
}

}  // namespace omtl::testing

#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "omtl/symmat.hpp"
#include "omtl/topology.hpp"
#include "omtl/types.hpp"

namespace omtl {

// Bytes per vector entry under the message accounting convention.
inline constexpr std::uint64_t kBytesPerEntry = 8;

// Worker -> server after the w-phase.
struct WorkerReport {
  std::size_t task_index = 0;
  Vector w_new;
  Vector z;
  Vector v;
};

// Server -> worker k after the u-phase.
struct ServerBroadcast {
  Vector u_new;
  // k-th column of Omega^{-1} + Omega^{-T}, sent as its own message.
  Vector omega_inv_column;
  Matrix v_matrix_digest;
};

struct RoundTrace {
  std::size_t round_index = 0;
  std::vector<Label> predictions;
  std::vector<Label> labels;
  std::vector<double> losses;
  std::uint64_t messages_sent = 0;
  std::uint64_t bytes_sent = 0;
  std::chrono::nanoseconds wall_clock{0};

  // One message carrying `entries` vector entries.
  void count_message(std::uint64_t entries) {
    ++messages_sent;
    bytes_sent += entries * kBytesPerEntry;
  }
};

struct ProtocolOptions {
  // Worker threads used within each phase. Results do not depend on it.
  std::size_t threads = 1;
  // 1-based round index; drives the eta schedule.
  std::size_t round_index = 1;
  // When false, omega is carried over unchanged (relationship learning off).
  bool update_omega = true;
  // Decentralized only: average the u values received from neighbors into
  // the local u before the v/z-phase.
  bool neighbor_u_averaging = false;
};

struct RoundResult {
  ModelState state;
  RelationshipMatrix omega;
  RoundTrace trace;
};

// One round of the server-coordinated protocol:
//   workers: predict with w_t, suffer loss, w-step        (parallel)
//   server:  gather (w_{t+1}, z_t), u-step, broadcast u   (barrier)
//   workers: v-step, then z-step                          (parallel)
//   server:  omega-step on the new V                      (barrier)
// Accounting per round: K reports up (w, z, v), K broadcasts down (u and V),
// K omega-column sends, i.e. 3K messages.
RoundResult run_centralized_round(const ModelState& state, const RelationshipMatrix& omega,
                                  std::span<const Sample> samples, const Hyperparameters& hp,
                                  const ProtocolOptions& options = {});

// One round of the serverless protocol over a ring or full topology. Each
// worker forms its own u from its closed neighborhood, exchanges it with its
// neighbors, runs the v/z-steps against it, and the new v columns are
// flooded for diameter(topo) hops so every worker holds the full V before
// recomputing omega.
RoundResult run_decentralized_round(const ModelState& state, const RelationshipMatrix& omega,
                                    std::span<const Sample> samples, const Topology& topo,
                                    const Hyperparameters& hp,
                                    const ProtocolOptions& options = {});

// x_0 + sum_k (x_k - x_0) / n, in ascending order. Returns x_0 bit-exactly
// when all inputs are equal.
Vector stable_mean(std::span<const Vector> xs);

}  // namespace omtl

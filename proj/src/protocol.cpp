#include "omtl/protocol.hpp"

#include <algorithm>

#include "omtl/admm.hpp"
#include "omtl/errors.hpp"
#include "omtl/model.hpp"
#include "omtl/parallel.hpp"

namespace omtl {

namespace {

using Clock = std::chrono::steady_clock;

void validate_inputs(const ModelState& state, const RelationshipMatrix& omega,
                     std::span<const Sample> samples, const Hyperparameters& hp) {
  hp.validate();
  state.validate(hp.K, hp.d);
  if (omega.size() != hp.K) {
    throw DimensionError("omega is " + describe_dims(omega.size(), hp.K) + " tasks");
  }
  if (samples.size() != hp.K) {
    throw DimensionError("round needs one sample per task: " +
                         describe_dims(samples.size(), hp.K));
  }
  for (const auto& s : samples) {
    if (static_cast<std::size_t>(s.features.size()) != hp.d) {
      throw DimensionError("sample dimension " +
                           describe_dims(static_cast<std::size_t>(s.features.size()), hp.d));
    }
  }
}

RoundTrace make_trace(std::size_t K, std::size_t round_index) {
  RoundTrace trace;
  trace.round_index = round_index;
  trace.predictions.resize(K);
  trace.labels.resize(K);
  trace.losses.resize(K);
  return trace;
}

// Predict with w_t, suffer the loss, take the linearized w-step.
std::vector<Vector> w_phase(const ModelState& state, std::span<const Sample> samples,
                            const Hyperparameters& hp_t, std::size_t threads,
                            RoundTrace& trace) {
  const std::size_t K = hp_t.K;
  std::vector<Vector> w_new(K);
  parallel_for(threads, K, [&](std::size_t k) {
    const Sample& s = samples[k];
    trace.predictions[k] = predict(state.w[k], s.features);
    trace.labels[k] = s.label;
    trace.losses[k] = hinge_loss(state.w[k], s.features, s.label);
    const Vector grad = hinge_subgradient(state.w[k], s.features, s.label);
    w_new[k] = update_w({state.w[k], state.v[k], state.z[k], k}, state.u_local[k], grad, hp_t);
  });
  return w_new;
}

Hyperparameters round_hyperparameters(const Hyperparameters& hp, const ProtocolOptions& options) {
  Hyperparameters hp_t = hp;
  hp_t.eta = hp.eta_at(options.round_index);
  return hp_t;
}

}  // namespace

Vector stable_mean(std::span<const Vector> xs) {
  if (xs.empty()) throw DimensionError("mean of an empty list");
  const Vector& base = xs.front();
  Vector acc = Vector::Zero(base.size());
  for (std::size_t k = 1; k < xs.size(); ++k) acc += xs[k] - base;
  return base + acc / static_cast<double>(xs.size());
}

RoundResult run_centralized_round(const ModelState& state, const RelationshipMatrix& omega,
                                  std::span<const Sample> samples, const Hyperparameters& hp,
                                  const ProtocolOptions& options) {
  const auto start = Clock::now();
  validate_inputs(state, omega, samples, hp);
  const std::size_t K = hp.K;
  const auto d = static_cast<std::uint64_t>(hp.d);
  const Hyperparameters hp_t = round_hyperparameters(hp, options);
  RoundTrace trace = make_trace(K, options.round_index);

  std::vector<Vector> w_new = w_phase(state, samples, hp_t, options.threads, trace);

  // Gather: one report per worker.
  std::vector<WorkerReport> reports(K);
  for (std::size_t k = 0; k < K; ++k) {
    reports[k] = WorkerReport{k, w_new[k], state.z[k], state.v[k]};
    trace.count_message(3 * d);
  }

  std::vector<Vector> gathered_w(K);
  std::vector<Vector> gathered_z(K);
  Matrix v_t(static_cast<Eigen::Index>(hp.d), static_cast<Eigen::Index>(K));
  for (const auto& r : reports) {
    gathered_w[r.task_index] = r.w_new;
    gathered_z[r.task_index] = r.z;
    v_t.col(static_cast<Eigen::Index>(r.task_index)) = r.v;
  }
  const Vector u_new = update_u(gathered_w, gathered_z, hp_t);
  const SymMatrix omega_inv = regularized_inverse(omega.omega(), hp.eps_inv);

  std::vector<ServerBroadcast> broadcasts(K);
  for (std::size_t k = 0; k < K; ++k) {
    broadcasts[k] = ServerBroadcast{u_new, omega_inv_column(omega_inv, k), v_t};
    trace.count_message(d + d * K);
    trace.count_message(K);
  }

  ModelState next;
  next.w = std::move(w_new);
  next.v.resize(K);
  next.z.resize(K);
  parallel_for(options.threads, K, [&](std::size_t k) {
    const ServerBroadcast& bc = broadcasts[k];
    const WorkerSlice slice{state.w[k], state.v[k], state.z[k], k};
    next.v[k] = update_v_from_column(slice, next.w[k], bc.v_matrix_digest, bc.omega_inv_column,
                                     hp_t);
    next.z[k] = update_z(slice, next.w[k], bc.u_new, next.v[k], hp_t);
  });
  next.u = u_new;
  next.u_local.assign(K, u_new);

  RelationshipMatrix omega_next =
      options.update_omega ? update_omega(next.v_matrix(), omega, hp.eps_tr) : omega;

  trace.wall_clock = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return RoundResult{std::move(next), std::move(omega_next), std::move(trace)};
}

RoundResult run_decentralized_round(const ModelState& state, const RelationshipMatrix& omega,
                                    std::span<const Sample> samples, const Topology& topo,
                                    const Hyperparameters& hp, const ProtocolOptions& options) {
  const auto start = Clock::now();
  if (topo.kind() == TopologyKind::kStar) {
    throw TopologyError("decentralized rounds need a ring or full topology, not a star");
  }
  if (topo.size() != hp.K) {
    throw TopologyError("topology has " + describe_dims(topo.size(), hp.K) + " workers");
  }
  validate_inputs(state, omega, samples, hp);
  const std::size_t K = hp.K;
  const auto d = static_cast<std::uint64_t>(hp.d);
  const std::size_t hops = diameter(topo);
  const Hyperparameters hp_t = round_hyperparameters(hp, options);
  RoundTrace trace = make_trace(K, options.round_index);

  const std::vector<Vector> w_new = w_phase(state, samples, hp_t, options.threads, trace);

  // 1-hop gather of (w_{t+1}, z_t), then a local u over the closed
  // neighborhood in ascending index order.
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < topo.degree(k); ++j) trace.count_message(2 * d);
  }
  std::vector<Vector> u_local(K);
  parallel_for(options.threads, K, [&](std::size_t k) {
    const auto hood = topo.closed_neighborhood(k);
    std::vector<Vector> ws;
    std::vector<Vector> zs;
    ws.reserve(hood.size());
    zs.reserve(hood.size());
    for (std::size_t j : hood) {
      ws.push_back(w_new[j]);
      zs.push_back(state.z[j]);
    }
    u_local[k] = update_u(ws, zs, hp_t);
  });

  // u exchange with neighbors.
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < topo.degree(k); ++j) trace.count_message(d);
  }
  if (options.neighbor_u_averaging) {
    std::vector<Vector> averaged(K);
    parallel_for(options.threads, K, [&](std::size_t k) {
      std::vector<Vector> received;
      for (std::size_t j : topo.closed_neighborhood(k)) received.push_back(u_local[j]);
      averaged[k] = stable_mean(received);
    });
    u_local = std::move(averaged);
  }

  // Every worker holds V_t and omega_t from the previous round's flood and
  // computes the same regularized inverse.
  const Matrix v_t = state.v_matrix();
  const SymMatrix omega_inv = regularized_inverse(omega.omega(), hp.eps_inv);

  ModelState next;
  next.w = w_new;
  next.v.resize(K);
  next.z.resize(K);
  parallel_for(options.threads, K, [&](std::size_t k) {
    const WorkerSlice slice{state.w[k], state.v[k], state.z[k], k};
    next.v[k] = update_v_from_column(slice, next.w[k], v_t, omega_inv_column(omega_inv, k), hp_t);
    next.z[k] = update_z(slice, next.w[k], u_local[k], next.v[k], hp_t);
  });

  // Multi-hop flood of the new v columns: at each hop a worker forwards to
  // every neighbor the columns it learned in the previous hop.
  std::vector<std::vector<char>> known(K, std::vector<char>(K, 0));
  std::vector<std::vector<std::size_t>> fresh(K);
  for (std::size_t k = 0; k < K; ++k) {
    known[k][k] = 1;
    fresh[k] = {k};
  }
  for (std::size_t hop = 0; hop < hops; ++hop) {
    std::vector<std::vector<std::size_t>> learned(K);
    for (std::size_t s = 0; s < K; ++s) {
      for (std::size_t r : topo.neighbors(s)) {
        trace.count_message(d * fresh[s].size());
        for (std::size_t col : fresh[s]) {
          if (!known[r][col]) {
            known[r][col] = 1;
            learned[r].push_back(col);
          }
        }
      }
    }
    for (auto& l : learned) std::sort(l.begin(), l.end());
    fresh = std::move(learned);
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (std::count(known[k].begin(), known[k].end(), 1) != static_cast<std::ptrdiff_t>(K)) {
      throw ConnectivityError("v flooding did not reach worker " + std::to_string(k));
    }
  }

  next.u = stable_mean(u_local);
  next.u_local = std::move(u_local);

  RelationshipMatrix omega_next =
      options.update_omega ? update_omega(next.v_matrix(), omega, hp.eps_tr) : omega;

  trace.wall_clock = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return RoundResult{std::move(next), std::move(omega_next), std::move(trace)};
}

}  // namespace omtl

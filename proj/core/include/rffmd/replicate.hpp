#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rffmd/stats.hpp"

namespace rffmd {

/// A replicated task maps (seed, replica index) to a fixed-length vector of
/// output scalars.
using ReplicaTask = std::function<std::vector<double>(std::uint64_t seed, int replica)>;

std::uint64_t replica_seed(std::uint64_t base_seed, int replica);

/// Raw outputs, outputs[q][i] for replica q and output i.
std::vector<std::vector<double>> run_replicas(const ReplicaTask& task, int Q,
                                              std::uint64_t base_seed);

/// Per-output mean, standard error and 95% half-width over the replicas.
std::vector<ReplicaStats> aggregate_replicas(const std::vector<std::vector<double>>& outputs);

/// Runs `task` Q >= 2 times. Errors are rethrown as ReplicaError carrying the
/// failing replica index.
std::vector<ReplicaStats> replicate(const ReplicaTask& task, int Q, std::uint64_t base_seed);

} // namespace rffmd

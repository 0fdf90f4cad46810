#include "rffmd/replicate.hpp"

#include "rffmd/errors.hpp"
#include "rffmd/parallel.hpp"
#include "rffmd/random.hpp"

namespace rffmd {

std::uint64_t replica_seed(std::uint64_t base_seed, int replica) {
    return derive_seed(base_seed, "replica", {static_cast<std::uint64_t>(replica)});
}

std::vector<std::vector<double>> run_replicas(const ReplicaTask& task, int Q, std::uint64_t base_seed) {
    if (Q < 1) throw InvalidArgument("replicate: Q must be >= 1");
    std::vector<std::vector<double>> outputs(static_cast<std::size_t>(Q));
    parallel_for(outputs.size(), [&](std::size_t q) {
        const int replica = static_cast<int>(q);
        try {
            outputs[q] = task(replica_seed(base_seed, replica), replica);
        } catch (const ReplicaError&) {
            throw;
        } catch (const NumericError& e) {
            throw ReplicaError(replica, e.what(), true);
        } catch (const std::exception& e) {
            throw ReplicaError(replica, e.what(), false);
        }
    });
    return outputs;
}

std::vector<ReplicaStats> aggregate_replicas(const std::vector<std::vector<double>>& outputs) {
    if (outputs.empty()) throw InvalidArgument("aggregate_replicas: no replicas");
    const std::size_t n = outputs.front().size();
    for (const auto& o : outputs)
        if (o.size() != n) throw InvalidArgument("aggregate_replicas: replicas returned different lengths");
    std::vector<ReplicaStats> stats(n);
    std::vector<double> column(outputs.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < outputs.size(); ++q) column[q] = outputs[q][i];
        stats[i] = summarize(column);
    }
    return stats;
}

std::vector<ReplicaStats> replicate(const ReplicaTask& task, int Q, std::uint64_t base_seed) {
    if (Q < 2) throw InvalidArgument("replicate: Q must be >= 2");
    return aggregate_replicas(run_replicas(task, Q, base_seed));
}

} // namespace rffmd

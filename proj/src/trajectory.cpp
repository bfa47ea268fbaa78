#include "dwellscope/trajectory.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dwellscope/csvio.hpp"
#include "dwellscope/error.hpp"

namespace dwellscope {

Trajectory build_trajectory(const VisitRecord& visit) {
    Trajectory t;
    t.device = visit.device;
    std::vector<PresenceInterval> ordered = visit.intervals;
    std::sort(ordered.begin(), ordered.end(),
              [](const PresenceInterval& a, const PresenceInterval& b) {
                  return std::tie(a.check_in, a.node.label, a.check_out) <
                         std::tie(b.check_in, b.node.label, b.check_out);
              });
    t.steps.reserve(ordered.size());
    for (const auto& iv : ordered) t.steps.push_back({iv.node, iv.check_in, iv.check_out});
    for (std::size_t i = 1; i < t.steps.size(); ++i) {
        const Timestamp travel = t.steps[i].check_in - t.steps[i - 1].check_out;
        t.travel_times.push_back(travel);
        t.overlap.push_back(travel < 0);
    }
    return t;
}

std::uint64_t TransitionMatrix::total_transitions() const {
    std::uint64_t total = 0;
    for (const auto& row : counts)
        for (const auto c : row) total += c;
    return total;
}

namespace {

TransitionMatrix finalize_matrix(const Deployment& deployment,
                                 std::vector<std::vector<std::uint64_t>> counts) {
    TransitionMatrix m;
    m.nodes = deployment.nodes();
    m.counts = std::move(counts);
    const std::size_t n = m.nodes.size();
    m.probabilities.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t row_total = 0;
        for (std::size_t j = 0; j < n; ++j) row_total += m.counts[i][j];
        if (row_total == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            m.probabilities[i][j] = static_cast<double>(m.counts[i][j]) / static_cast<double>(row_total);
        m.self_transitions += m.counts[i][i];
    }
    return m;
}

} // namespace

TransitionMatrix transition_matrix(const std::vector<Trajectory>& trajectories,
                                   const Deployment& deployment) {
    const std::size_t n = deployment.size();
    std::vector<std::vector<std::uint64_t>> counts(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& t : trajectories) {
        for (std::size_t i = 1; i < t.steps.size(); ++i) {
            const auto from = deployment.index_of(t.steps[i - 1].node.label);
            const auto to = deployment.index_of(t.steps[i].node.label);
            if (!from || !to)
                throw Error(ErrorCode::config_error,
                            "trajectory visits a node outside the deployment");
            ++counts[*from][*to];
        }
    }
    return finalize_matrix(deployment, std::move(counts));
}

TransitionMatrix transition_matrix_log_serial(const VisitLog& log) {
    const auto& deployment = log.intervals().deployment();
    const std::size_t n = deployment.size();
    std::vector<std::vector<std::uint64_t>> counts(n, std::vector<std::uint64_t>(n, 0));
    const auto intervals = log.intervals().intervals();
    for (const auto& v : log.visits()) {
        for (std::uint32_t k = 1; k < v.interval_count; ++k) {
            const auto& prev = intervals[v.first_interval + k - 1];
            const auto& cur = intervals[v.first_interval + k];
            ++counts[prev.node][cur.node];
        }
    }
    return finalize_matrix(deployment, std::move(counts));
}

TransitionMatrix transition_matrix_log(const VisitLog& log) {
    const auto& deployment = log.intervals().deployment();
    const std::size_t n = deployment.size();
    const auto intervals = log.intervals().intervals();
    const auto visits = log.visits();

    int n_threads = 1;
#ifdef _OPENMP
    n_threads = omp_get_max_threads();
#endif
    std::vector<std::vector<std::uint64_t>> partial(
        static_cast<std::size_t>(n_threads), std::vector<std::uint64_t>(n * n, 0));

    const auto n_visits = static_cast<std::int64_t>(visits.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t vi = 0; vi < n_visits; ++vi) {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        auto& local = partial[static_cast<std::size_t>(tid)];
        const auto& v = visits[vi];
        for (std::uint32_t k = 1; k < v.interval_count; ++k) {
            const auto& prev = intervals[v.first_interval + k - 1];
            const auto& cur = intervals[v.first_interval + k];
            ++local[static_cast<std::size_t>(prev.node) * n + cur.node];
        }
    }

    std::vector<std::vector<std::uint64_t>> counts(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& local : partial)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) counts[i][j] += local[i * n + j];
    return finalize_matrix(deployment, std::move(counts));
}

TravelTimeStats travel_time_stats(const std::vector<Trajectory>& trajectories, const NodeId& from,
                                  const NodeId& to) {
    std::vector<Timestamp> samples;
    std::size_t excluded = 0;
    for (const auto& t : trajectories) {
        for (std::size_t i = 1; i < t.steps.size(); ++i) {
            if (t.steps[i - 1].node != from || t.steps[i].node != to) continue;
            const Timestamp travel = t.travel_times[i - 1];
            if (travel < 0) {
                ++excluded;
                continue;
            }
            samples.push_back(travel);
        }
    }
    if (samples.empty())
        throw Error(ErrorCode::no_samples, "no non-negative travel samples for " + from.label +
                                               "->" + to.label + " (excluded " +
                                               std::to_string(excluded) + " overlapped)");
    std::sort(samples.begin(), samples.end());
    TravelTimeStats s;
    s.n = samples.size();
    s.excluded_negative = excluded;
    s.min = samples.front();
    s.max = samples.back();
    double sum = 0;
    for (const auto v : samples) sum += static_cast<double>(v);
    s.mean = sum / static_cast<double>(samples.size());
    const std::size_t mid = samples.size() / 2;
    s.median = samples.size() % 2 == 1
                   ? static_cast<double>(samples[mid])
                   : (static_cast<double>(samples[mid - 1]) + static_cast<double>(samples[mid])) / 2.0;
    return s;
}

void write_transition_csv(const TransitionMatrix& m, const std::filesystem::path& prob_path,
                          const std::filesystem::path& counts_path) {
    const std::size_t n = m.nodes.size();
    {
        BufferedWriter w(prob_path);
        w.write("node");
        for (const auto& node : m.nodes) {
            w.put(',');
            w.write(node.label);
        }
        w.newline();
        for (std::size_t i = 0; i < n; ++i) {
            w.write(m.nodes[i].label);
            for (std::size_t j = 0; j < n; ++j) {
                w.put(',');
                w.write_fixed(m.probabilities[i][j], 6);
            }
            w.newline();
        }
        w.close();
    }
    {
        BufferedWriter w(counts_path);
        w.write("node");
        for (const auto& node : m.nodes) {
            w.put(',');
            w.write(node.label);
        }
        w.newline();
        for (std::size_t i = 0; i < n; ++i) {
            w.write(m.nodes[i].label);
            for (std::size_t j = 0; j < n; ++j) {
                w.put(',');
                w.write_uint(m.counts[i][j]);
            }
            w.newline();
        }
        w.close();
    }
}

} // namespace dwellscope

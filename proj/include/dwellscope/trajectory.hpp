#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dwellscope/sessionize.hpp"
#include "dwellscope/types.hpp"

namespace dwellscope {

struct TrajectoryStep {
    NodeId node;
    Timestamp check_in = 0;
    Timestamp check_out = 0;
};

/// A visit's node sequence. travel_times[i] is the silence between leaving
/// steps[i] and appearing at steps[i+1]; negative values mean the two
/// detections overlapped (sensor ranges can overlap) and are flagged.
struct Trajectory {
    DeviceId device;
    std::vector<TrajectoryStep> steps;
    std::vector<Timestamp> travel_times;
    std::vector<bool> overlap;
};

Trajectory build_trajectory(const VisitRecord& visit);

struct TransitionMatrix {
    std::vector<NodeId> nodes;
    std::vector<std::vector<double>> probabilities; // row-normalized counts
    std::vector<std::vector<std::uint64_t>> counts;
    std::uint64_t self_transitions = 0; // diagonal total, reported separately

    std::uint64_t total_transitions() const;
};

/// Counts consecutive step pairs (including self-transitions) across all
/// trajectories; rows with no observations stay all-zero.
TransitionMatrix transition_matrix(const std::vector<Trajectory>& trajectories,
                                   const Deployment& deployment);

/// Same counting over a whole visit log; partial count matrices are
/// accumulated per thread and merged by elementwise addition.
TransitionMatrix transition_matrix_log(const VisitLog& log);
TransitionMatrix transition_matrix_log_serial(const VisitLog& log);

struct TravelTimeStats {
    Timestamp min = 0;
    Timestamp max = 0;
    double median = 0;
    double mean = 0;
    std::size_t n = 0;
    std::size_t excluded_negative = 0;
};

/// Summary of non-negative travel times for the ordered pair from->to;
/// overlapped samples are excluded and counted. Throws no_samples.
TravelTimeStats travel_time_stats(const std::vector<Trajectory>& trajectories, const NodeId& from,
                                  const NodeId& to);

/// CSV export: header row of node labels, one row per source node,
/// probabilities with 6 decimals; `_counts` variant carries integers.
void write_transition_csv(const TransitionMatrix& m, const std::filesystem::path& prob_path,
                          const std::filesystem::path& counts_path);

} // namespace dwellscope

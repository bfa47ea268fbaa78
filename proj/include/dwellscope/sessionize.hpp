#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dwellscope/events.hpp"
#include "dwellscope/types.hpp"

namespace dwellscope {

/// One check-in/check-out span of a device at a node. Zero duration encodes
/// a pass-through seen by a single sighting.
struct PresenceInterval {
    DeviceId device;
    NodeId node;
    Timestamp check_in = 0;
    Timestamp check_out = 0;

    Timestamp duration() const { return check_out - check_in; }

    auto operator<=>(const PresenceInterval&) const = default;
};

struct IntervalRec {
    std::uint32_t device = 0;
    std::uint16_t node = 0;
    Timestamp check_in = 0;
    Timestamp check_out = 0;

    Timestamp duration() const { return check_out - check_in; }

    bool operator==(const IntervalRec&) const = default;
};

/// Compact interval store sharing the device table of the log it came from.
class IntervalLog {
public:
    IntervalLog() : IntervalLog(Deployment::paper_default(), {}) {}
    IntervalLog(Deployment deployment, std::vector<std::string> device_hex)
        : deployment_(std::move(deployment)), device_hex_(std::move(device_hex)) {}

    const Deployment& deployment() const { return deployment_; }
    const std::vector<std::string>& device_hex() const { return device_hex_; }
    const std::string& device(std::uint32_t index) const { return device_hex_[index]; }

    std::span<const IntervalRec> intervals() const { return intervals_; }
    std::vector<IntervalRec>& mutable_intervals() { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }

    std::vector<PresenceInterval> to_intervals() const;

private:
    Deployment deployment_;
    std::vector<std::string> device_hex_;
    std::vector<IntervalRec> intervals_;
};

/// Applies the gap rule to the time-sorted sightings of one device at one
/// node: inter-arrival <= gap_threshold extends the open interval, a larger
/// gap closes it. A lone sighting yields a zero-duration interval.
/// Throws unsorted_input / config_error.
std::vector<PresenceInterval> sessionize(std::span<const SightingEvent> events,
                                         Timestamp gap_threshold);

/// Gap rule over a whole log. Events are grouped by (device, node) and each
/// group is sessionized independently; groups run in parallel.
IntervalLog sessionize_log(const EventLog& log, Timestamp gap_threshold);

/// Single-threaded reference for the kernel above, kept for tests and the
/// benchmark.
IntervalLog sessionize_log_serial(const EventLog& log, Timestamp gap_threshold);

/// One device's museum-day activity.
struct VisitRecord {
    DeviceId device;
    Timestamp entry_time = 0;
    Timestamp exit_time = 0;
    std::vector<PresenceInterval> intervals; // ordered by (check_in, node)
    std::uint32_t unique_nodes = 0;
    std::uint32_t total_node_visits = 0;

    Timestamp total_stay() const { return exit_time - entry_time; }
};

/// Aggregates the intervals of one device (already restricted to one museum
/// day) into a VisitRecord. Throws empty_visit on empty input and
/// config_error if the intervals span several devices.
VisitRecord build_visits(std::vector<PresenceInterval> intervals);

/// Partitions intervals by (device, local calendar day of check_in). An
/// interval straddling midnight belongs to its check-in day.
std::vector<std::vector<PresenceInterval>> split_days(std::span<const PresenceInterval> intervals,
                                                      std::int32_t utc_offset_s = 0);

struct VisitRec {
    std::uint32_t device = 0;
    std::int64_t day_index = 0;
    Timestamp entry = 0;
    Timestamp exit = 0;
    std::uint32_t first_interval = 0; // range into VisitLog::intervals()
    std::uint32_t interval_count = 0;
    std::uint16_t unique_nodes = 0;

    Timestamp total_stay() const { return exit - entry; }
};

/// Visits over a whole interval log; intervals are re-sorted by
/// (device, check_in, node) so each visit is a contiguous range.
class VisitLog {
public:
    VisitLog() = default;
    VisitLog(IntervalLog intervals, std::int32_t utc_offset_s);

    const IntervalLog& intervals() const { return intervals_; }
    std::span<const VisitRec> visits() const { return visits_; }
    std::size_t size() const { return visits_.size(); }

    VisitRecord materialize(const VisitRec& v) const;

private:
    IntervalLog intervals_;
    std::vector<VisitRec> visits_;
};

/// Interval file: `device_id,node_id,check_in_s,check_out_s,duration_s`.
void write_intervals_csv(const IntervalLog& log, const std::filesystem::path& path);
IntervalLog read_intervals_csv(const std::filesystem::path& path, const Deployment& deployment,
                               ValidationReport* report = nullptr);

/// Visit file: `device_id,entry_s,exit_s,total_stay_s,unique_nodes,total_node_visits`.
void write_visits_csv(const VisitLog& log, const std::filesystem::path& path);

struct VisitRow {
    std::string device;
    Timestamp entry = 0;
    Timestamp exit = 0;
    Timestamp total_stay = 0;
    std::uint32_t unique_nodes = 0;
    std::uint32_t total_node_visits = 0;
};
std::vector<VisitRow> read_visits_csv(const std::filesystem::path& path,
                                      ValidationReport* report = nullptr);

} // namespace dwellscope

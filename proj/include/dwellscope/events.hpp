#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dwellscope/types.hpp"

namespace dwellscope {

/// Interned sighting: device/node are indices into the owning log's tables.
struct CompactEvent {
    std::uint32_t device = 0;
    std::uint16_t node = 0;
    Timestamp t = 0;
    std::int16_t rssi = kNoRssi;

    static constexpr std::int16_t kNoRssi = std::numeric_limits<std::int16_t>::min();

    bool operator==(const CompactEvent&) const = default;
};

struct ValidationReport {
    std::uint64_t kept = 0;
    std::uint64_t duplicates_removed = 0;
    std::uint64_t unknown_node_dropped = 0;
    std::uint64_t out_of_order = 0;    // adjacent (device, timestamp) descents in input order
    std::uint64_t malformed_lines = 0; // file readers only

    std::uint64_t dropped() const { return duplicates_removed + unknown_node_dropped + malformed_lines; }
};

/// Columnar store of sightings with an interned device table. All bulk
/// pipeline stages run on this form; the string-typed SightingEvent is the
/// record type at API edges.
class EventLog {
public:
    EventLog() : EventLog(Deployment::paper_default()) {}
    explicit EventLog(Deployment deployment) : deployment_(std::move(deployment)) {}

    const Deployment& deployment() const { return deployment_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    std::span<const CompactEvent> events() const { return events_; }
    const std::vector<std::string>& device_hex() const { return device_hex_; }
    const std::string& device(std::uint32_t index) const { return device_hex_[index]; }
    std::size_t device_count() const { return device_hex_.size(); }

    std::uint32_t intern_device(std::string_view hex);
    void add(std::uint32_t device, std::uint16_t node, Timestamp t,
             std::int16_t rssi = CompactEvent::kNoRssi);
    /// Adds by label; returns false (and counts nothing) for unknown nodes.
    bool add(std::string_view device_hex, std::string_view node_label, Timestamp t,
             std::int16_t rssi = CompactEvent::kNoRssi);
    void reserve(std::size_t n) { events_.reserve(n); }

    /// Sort by (device id, timestamp, node label, rssi), drop exact
    /// duplicates, and report how disordered the input was. Idempotent.
    ValidationReport validate();

    /// Device indices ordered by hex id; node indices ordered by label.
    std::vector<std::uint32_t> device_rank() const;
    std::vector<std::uint16_t> node_rank() const;

    std::vector<SightingEvent> to_events() const;
    static EventLog from_events(const Deployment& deployment,
                                std::span<const SightingEvent> events,
                                ValidationReport* report = nullptr);

    std::vector<CompactEvent>& mutable_events() { return events_; }

private:
    Deployment deployment_;
    std::vector<std::string> device_hex_;
    std::unordered_map<std::string, std::uint32_t> device_index_;
    std::vector<CompactEvent> events_;
};

/// Spec-level cleaning: events for unknown nodes dropped (counted), output
/// sorted by (device, timestamp), exact duplicates removed.
std::vector<SightingEvent> validate_stream(std::span<const SightingEvent> events,
                                           const Deployment& deployment,
                                           ValidationReport* report = nullptr);

/// Event file I/O. CSV: header `timestamp_s,device_id,node_id,rssi` (rssi may
/// be empty). JSONL: one object per line with the same keys. Readers drop and
/// count malformed lines and unknown nodes.
EventLog read_events_file(const std::filesystem::path& path, const Deployment& deployment,
                          ValidationReport* report = nullptr);
void write_events_csv(const EventLog& log, const std::filesystem::path& path);

} // namespace dwellscope

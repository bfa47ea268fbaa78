#include "dwellscope/events.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "dwellscope/csvio.hpp"
#include "dwellscope/error.hpp"

namespace dwellscope {

std::uint32_t EventLog::intern_device(std::string_view hex) {
    const auto it = device_index_.find(std::string(hex));
    if (it != device_index_.end()) return it->second;
    const auto idx = static_cast<std::uint32_t>(device_hex_.size());
    device_hex_.emplace_back(hex);
    device_index_.emplace(device_hex_.back(), idx);
    return idx;
}

void EventLog::add(std::uint32_t device, std::uint16_t node, Timestamp t, std::int16_t rssi) {
    events_.push_back(CompactEvent{device, node, t, rssi});
}

bool EventLog::add(std::string_view device_hex, std::string_view node_label, Timestamp t,
                   std::int16_t rssi) {
    const auto node = deployment_.index_of(node_label);
    if (!node) return false;
    add(intern_device(device_hex), *node, t, rssi);
    return true;
}

std::vector<std::uint32_t> EventLog::device_rank() const {
    std::vector<std::uint32_t> order(device_hex_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return device_hex_[a] < device_hex_[b];
    });
    std::vector<std::uint32_t> rank(device_hex_.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    return rank;
}

std::vector<std::uint16_t> EventLog::node_rank() const {
    const std::size_t n = deployment_.size();
    std::vector<std::uint16_t> order(n);
    std::iota(order.begin(), order.end(), std::uint16_t{0});
    std::sort(order.begin(), order.end(), [&](std::uint16_t a, std::uint16_t b) {
        return deployment_.node(a).label < deployment_.node(b).label;
    });
    std::vector<std::uint16_t> rank(n);
    for (std::uint16_t r = 0; r < n; ++r) rank[order[r]] = r;
    return rank;
}

ValidationReport EventLog::validate() {
    ValidationReport report;
    const auto drank = device_rank();
    const auto nrank = node_rank();

    for (std::size_t i = 1; i < events_.size(); ++i) {
        const auto& a = events_[i - 1];
        const auto& b = events_[i];
        if (std::pair(drank[b.device], b.t) < std::pair(drank[a.device], a.t))
            ++report.out_of_order;
    }

    std::sort(events_.begin(), events_.end(), [&](const CompactEvent& a, const CompactEvent& b) {
        return std::tuple(drank[a.device], a.t, nrank[a.node], a.rssi) <
               std::tuple(drank[b.device], b.t, nrank[b.node], b.rssi);
    });
    const auto last = std::unique(events_.begin(), events_.end());
    report.duplicates_removed = static_cast<std::uint64_t>(events_.end() - last);
    events_.erase(last, events_.end());
    report.kept = events_.size();
    return report;
}

std::vector<SightingEvent> EventLog::to_events() const {
    std::vector<SightingEvent> out;
    out.reserve(events_.size());
    for (const auto& e : events_) {
        SightingEvent s;
        s.device = DeviceId{device_hex_[e.device]};
        s.node = deployment_.node(e.node);
        s.timestamp = e.t;
        if (e.rssi != CompactEvent::kNoRssi) s.rssi = e.rssi;
        out.push_back(std::move(s));
    }
    return out;
}

EventLog EventLog::from_events(const Deployment& deployment, std::span<const SightingEvent> events,
                               ValidationReport* report) {
    EventLog log(deployment);
    log.reserve(events.size());
    std::uint64_t unknown = 0;
    for (const auto& e : events) {
        const std::int16_t rssi =
            e.rssi ? static_cast<std::int16_t>(*e.rssi) : CompactEvent::kNoRssi;
        if (!log.add(e.device.hex, e.node.label, e.timestamp, rssi)) ++unknown;
    }
    if (report) report->unknown_node_dropped += unknown;
    return log;
}

std::vector<SightingEvent> validate_stream(std::span<const SightingEvent> events,
                                           const Deployment& deployment,
                                           ValidationReport* report) {
    ValidationReport local;
    EventLog log = EventLog::from_events(deployment, events, &local);
    const ValidationReport v = log.validate();
    local.kept = v.kept;
    local.duplicates_removed = v.duplicates_removed;
    local.out_of_order = v.out_of_order;
    if (report) *report = local;
    return log.to_events();
}

namespace {

constexpr std::string_view kEventsHeader = "timestamp_s,device_id,node_id,rssi";

EventLog read_events_csv(const std::filesystem::path& path, const Deployment& deployment,
                         ValidationReport* report) {
    EventLog log(deployment);
    LineReader reader(path);
    std::string_view line;
    std::uint64_t malformed = 0;
    std::uint64_t unknown = 0;
    bool first = true;
    while (reader.next(line)) {
        if (first) {
            first = false;
            if (line == kEventsHeader) continue;
            // headerless files are accepted
        }
        if (line.empty()) continue;
        std::array<std::string_view, 4> f;
        if (!split_fields(line, f)) {
            ++malformed;
            continue;
        }
        const auto t = parse_i64(f[0]);
        std::int16_t rssi = CompactEvent::kNoRssi;
        bool ok = t.has_value() && *t >= 0 && !f[1].empty();
        if (ok && !f[3].empty()) {
            const auto r = parse_i64(f[3]);
            ok = r.has_value() && *r >= -32000 && *r <= 32000;
            if (ok) rssi = static_cast<std::int16_t>(*r);
        }
        if (!ok) {
            ++malformed;
            continue;
        }
        if (!log.add(f[1], f[2], *t, rssi)) ++unknown;
    }
    if (report) {
        report->malformed_lines += malformed;
        report->unknown_node_dropped += unknown;
    }
    return log;
}

EventLog read_events_jsonl(const std::filesystem::path& path, const Deployment& deployment,
                           ValidationReport* report) {
    EventLog log(deployment);
    LineReader reader(path);
    std::string_view line;
    std::uint64_t malformed = 0;
    std::uint64_t unknown = 0;
    while (reader.next(line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("timestamp_s") ||
            !j.contains("device_id") || !j.contains("node_id") ||
            !j["timestamp_s"].is_number_integer() || !j["device_id"].is_string() ||
            !j["node_id"].is_string() || j["timestamp_s"].get<std::int64_t>() < 0) {
            ++malformed;
            continue;
        }
        std::int16_t rssi = CompactEvent::kNoRssi;
        if (j.contains("rssi") && !j["rssi"].is_null()) {
            if (!j["rssi"].is_number_integer()) {
                ++malformed;
                continue;
            }
            rssi = static_cast<std::int16_t>(j["rssi"].get<int>());
        }
        const std::string node = j["node_id"].get<std::string>();
        if (!deployment.contains(node)) {
            ++unknown;
            continue;
        }
        log.add(j["device_id"].get<std::string>(), node, j["timestamp_s"].get<std::int64_t>(), rssi);
    }
    if (report) {
        report->malformed_lines += malformed;
        report->unknown_node_dropped += unknown;
    }
    return log;
}

} // namespace

EventLog read_events_file(const std::filesystem::path& path, const Deployment& deployment,
                          ValidationReport* report) {
    if (path.extension() == ".jsonl") return read_events_jsonl(path, deployment, report);
    return read_events_csv(path, deployment, report);
}

void write_events_csv(const EventLog& log, const std::filesystem::path& path) {
    BufferedWriter w(path);
    w.write(kEventsHeader);
    w.newline();
    for (const auto& e : log.events()) {
        w.write_int(e.t);
        w.put(',');
        w.write(log.device(e.device));
        w.put(',');
        w.write(log.deployment().node(e.node).label);
        w.put(',');
        if (e.rssi != CompactEvent::kNoRssi) w.write_int(e.rssi);
        w.newline();
    }
    w.close();
}

} // namespace dwellscope

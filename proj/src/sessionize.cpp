#include "dwellscope/sessionize.hpp"

#include <algorithm>
#include <tuple>

#include "dwellscope/csvio.hpp"
#include "dwellscope/error.hpp"
#include "dwellscope/timeutil.hpp"

namespace dwellscope {

namespace {

/// Walks n sorted timestamps (time(i)) and invokes f(check_in, check_out)
/// per interval. The single place the gap rule lives.
template <typename GetTime, typename OnInterval>
void scan_session_boundaries(std::size_t n, GetTime&& time, Timestamp gap, OnInterval&& f) {
    if (n == 0) return;
    Timestamp in = time(0);
    Timestamp last = in;
    for (std::size_t i = 1; i < n; ++i) {
        const Timestamp t = time(i);
        if (t - last > gap) {
            f(in, last);
            in = t;
        }
        last = t;
    }
    f(in, last);
}

struct GroupRange {
    std::size_t begin;
    std::size_t end;
};

std::vector<GroupRange> device_node_groups(std::span<const CompactEvent> events) {
    std::vector<GroupRange> groups;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= events.size(); ++i) {
        if (i == events.size() || events[i].device != events[start].device ||
            events[i].node != events[start].node) {
            groups.push_back({start, i});
            start = i;
        }
    }
    return groups;
}

std::vector<CompactEvent> sorted_by_device_node_time(const EventLog& log) {
    std::vector<CompactEvent> events(log.events().begin(), log.events().end());
    std::sort(events.begin(), events.end(), [](const CompactEvent& a, const CompactEvent& b) {
        return std::tuple(a.device, a.node, a.t) < std::tuple(b.device, b.node, b.t);
    });
    return events;
}

} // namespace

std::vector<PresenceInterval> sessionize(std::span<const SightingEvent> events,
                                         Timestamp gap_threshold) {
    if (gap_threshold <= 0)
        throw Error(ErrorCode::config_error, "gap_threshold must be positive");
    if (events.empty()) return {};
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].timestamp < events[i - 1].timestamp)
            throw Error(ErrorCode::unsorted_input, "sightings must be sorted by timestamp");
        if (events[i].device != events[0].device || events[i].node != events[0].node)
            throw Error(ErrorCode::config_error,
                        "sessionize expects one device at one node; use sessionize_log");
    }
    std::vector<PresenceInterval> out;
    scan_session_boundaries(
        events.size(), [&](std::size_t i) { return events[i].timestamp; }, gap_threshold,
        [&](Timestamp in, Timestamp last) {
            out.push_back({events[0].device, events[0].node, in, last});
        });
    return out;
}

IntervalLog sessionize_log_serial(const EventLog& log, Timestamp gap_threshold) {
    if (gap_threshold <= 0)
        throw Error(ErrorCode::config_error, "gap_threshold must be positive");
    IntervalLog out(log.deployment(), log.device_hex());
    const auto events = sorted_by_device_node_time(log);
    auto& intervals = out.mutable_intervals();
    for (const auto& g : device_node_groups(events)) {
        scan_session_boundaries(
            g.end - g.begin, [&](std::size_t i) { return events[g.begin + i].t; }, gap_threshold,
            [&](Timestamp in, Timestamp last) {
                intervals.push_back({events[g.begin].device, events[g.begin].node, in, last});
            });
    }
    return out;
}

IntervalLog sessionize_log(const EventLog& log, Timestamp gap_threshold) {
    if (gap_threshold <= 0)
        throw Error(ErrorCode::config_error, "gap_threshold must be positive");
    IntervalLog out(log.deployment(), log.device_hex());
    const auto events = sorted_by_device_node_time(log);
    const auto groups = device_node_groups(events);

    // Two passes keep the output order independent of thread count: count
    // intervals per group, then fill disjoint slices.
    std::vector<std::size_t> counts(groups.size(), 0);
    const auto n_groups = static_cast<std::int64_t>(groups.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t gi = 0; gi < n_groups; ++gi) {
        const auto& g = groups[gi];
        std::size_t n = 0;
        scan_session_boundaries(
            g.end - g.begin, [&](std::size_t i) { return events[g.begin + i].t; }, gap_threshold,
            [&](Timestamp, Timestamp) { ++n; });
        counts[gi] = n;
    }
    std::vector<std::size_t> offsets(groups.size() + 1, 0);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) offsets[gi + 1] = offsets[gi] + counts[gi];

    auto& intervals = out.mutable_intervals();
    intervals.resize(offsets.back());
#pragma omp parallel for schedule(static)
    for (std::int64_t gi = 0; gi < n_groups; ++gi) {
        const auto& g = groups[gi];
        std::size_t slot = offsets[gi];
        scan_session_boundaries(
            g.end - g.begin, [&](std::size_t i) { return events[g.begin + i].t; }, gap_threshold,
            [&](Timestamp in, Timestamp last) {
                intervals[slot++] = {events[g.begin].device, events[g.begin].node, in, last};
            });
    }
    return out;
}

std::vector<PresenceInterval> IntervalLog::to_intervals() const {
    std::vector<PresenceInterval> out;
    out.reserve(intervals_.size());
    for (const auto& r : intervals_)
        out.push_back({DeviceId{device_hex_[r.device]}, deployment_.node(r.node), r.check_in,
                       r.check_out});
    return out;
}

VisitRecord build_visits(std::vector<PresenceInterval> intervals) {
    if (intervals.empty())
        throw Error(ErrorCode::empty_visit, "a visit needs at least one interval");
    for (const auto& iv : intervals)
        if (iv.device != intervals[0].device)
            throw Error(ErrorCode::config_error, "intervals of a visit must share one device");

    std::sort(intervals.begin(), intervals.end(),
              [](const PresenceInterval& a, const PresenceInterval& b) {
                  return std::tie(a.check_in, a.node.label, a.check_out) <
                         std::tie(b.check_in, b.node.label, b.check_out);
              });

    VisitRecord v;
    v.device = intervals[0].device;
    v.entry_time = intervals[0].check_in;
    v.exit_time = intervals[0].check_out;
    std::vector<std::string> labels;
    for (const auto& iv : intervals) {
        v.exit_time = std::max(v.exit_time, iv.check_out);
        labels.push_back(iv.node.label);
    }
    std::sort(labels.begin(), labels.end());
    v.unique_nodes =
        static_cast<std::uint32_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
    v.total_node_visits = static_cast<std::uint32_t>(intervals.size());
    v.intervals = std::move(intervals);
    return v;
}

std::vector<std::vector<PresenceInterval>> split_days(std::span<const PresenceInterval> intervals,
                                                      std::int32_t utc_offset_s) {
    std::vector<PresenceInterval> sorted(intervals.begin(), intervals.end());
    std::sort(sorted.begin(), sorted.end(),
              [&](const PresenceInterval& a, const PresenceInterval& b) {
                  return std::tie(a.device.hex, a.check_in, a.node.label) <
                         std::tie(b.device.hex, b.check_in, b.node.label);
              });
    std::vector<std::vector<PresenceInterval>> groups;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const std::int64_t day = local_day_index(sorted[i].check_in, utc_offset_s);
        if (groups.empty() || sorted[i].device != groups.back().front().device ||
            day != local_day_index(groups.back().front().check_in, utc_offset_s)) {
            groups.emplace_back();
        }
        groups.back().push_back(sorted[i]);
    }
    return groups;
}

VisitLog::VisitLog(IntervalLog intervals, std::int32_t utc_offset_s)
    : intervals_(std::move(intervals)) {
    auto& recs = intervals_.mutable_intervals();
    std::sort(recs.begin(), recs.end(), [](const IntervalRec& a, const IntervalRec& b) {
        return std::tuple(a.device, a.check_in, a.node, a.check_out) <
               std::tuple(b.device, b.check_in, b.node, b.check_out);
    });

    std::vector<bool> seen(intervals_.deployment().size(), false);
    std::size_t start = 0;
    for (std::size_t i = 1; i <= recs.size(); ++i) {
        const bool boundary =
            i == recs.size() || recs[i].device != recs[start].device ||
            local_day_index(recs[i].check_in, utc_offset_s) !=
                local_day_index(recs[start].check_in, utc_offset_s);
        if (!boundary) continue;

        VisitRec v;
        v.device = recs[start].device;
        v.day_index = local_day_index(recs[start].check_in, utc_offset_s);
        v.entry = recs[start].check_in;
        v.exit = recs[start].check_out;
        v.first_interval = static_cast<std::uint32_t>(start);
        v.interval_count = static_cast<std::uint32_t>(i - start);
        std::fill(seen.begin(), seen.end(), false);
        std::uint16_t unique = 0;
        for (std::size_t k = start; k < i; ++k) {
            v.exit = std::max(v.exit, recs[k].check_out);
            if (!seen[recs[k].node]) {
                seen[recs[k].node] = true;
                ++unique;
            }
        }
        v.unique_nodes = unique;
        visits_.push_back(v);
        start = i;
    }
}

VisitRecord VisitLog::materialize(const VisitRec& v) const {
    std::vector<PresenceInterval> ivs;
    ivs.reserve(v.interval_count);
    const auto all = intervals_.intervals();
    for (std::uint32_t k = 0; k < v.interval_count; ++k) {
        const auto& r = all[v.first_interval + k];
        ivs.push_back({DeviceId{intervals_.device(r.device)}, intervals_.deployment().node(r.node),
                       r.check_in, r.check_out});
    }
    return build_visits(std::move(ivs));
}

namespace {
constexpr std::string_view kIntervalsHeader = "device_id,node_id,check_in_s,check_out_s,duration_s";
constexpr std::string_view kVisitsHeader =
    "device_id,entry_s,exit_s,total_stay_s,unique_nodes,total_node_visits";
} // namespace

void write_intervals_csv(const IntervalLog& log, const std::filesystem::path& path) {
    BufferedWriter w(path);
    w.write(kIntervalsHeader);
    w.newline();
    for (const auto& r : log.intervals()) {
        w.write(log.device(r.device));
        w.put(',');
        w.write(log.deployment().node(r.node).label);
        w.put(',');
        w.write_int(r.check_in);
        w.put(',');
        w.write_int(r.check_out);
        w.put(',');
        w.write_int(r.duration());
        w.newline();
    }
    w.close();
}

IntervalLog read_intervals_csv(const std::filesystem::path& path, const Deployment& deployment,
                               ValidationReport* report) {
    std::vector<IntervalRec> recs;
    std::unordered_map<std::string, std::uint32_t> device_index;
    std::vector<std::string> device_hex;
    LineReader reader(path);
    std::string_view line;
    std::uint64_t malformed = 0;
    std::uint64_t unknown = 0;
    bool first = true;
    while (reader.next(line)) {
        if (first) {
            first = false;
            if (line == kIntervalsHeader) continue;
        }
        if (line.empty()) continue;
        std::array<std::string_view, 5> f;
        if (!split_fields(line, f)) {
            ++malformed;
            continue;
        }
        const auto in = parse_i64(f[2]);
        const auto out_t = parse_i64(f[3]);
        const auto dur = parse_i64(f[4]);
        if (f[0].empty() || !in || !out_t || !dur || *out_t < *in || *dur != *out_t - *in) {
            ++malformed;
            continue;
        }
        const auto node = deployment.index_of(f[1]);
        if (!node) {
            ++unknown;
            continue;
        }
        const std::string key(f[0]);
        auto it = device_index.find(key);
        if (it == device_index.end()) {
            it = device_index.emplace(key, static_cast<std::uint32_t>(device_hex.size())).first;
            device_hex.push_back(key);
        }
        recs.push_back({it->second, *node, *in, *out_t});
    }
    if (report) {
        report->malformed_lines += malformed;
        report->unknown_node_dropped += unknown;
        report->kept = recs.size();
    }
    IntervalLog out(deployment, std::move(device_hex));
    out.mutable_intervals() = std::move(recs);
    return out;
}

void write_visits_csv(const VisitLog& log, const std::filesystem::path& path) {
    BufferedWriter w(path);
    w.write(kVisitsHeader);
    w.newline();
    for (const auto& v : log.visits()) {
        w.write(log.intervals().device(v.device));
        w.put(',');
        w.write_int(v.entry);
        w.put(',');
        w.write_int(v.exit);
        w.put(',');
        w.write_int(v.total_stay());
        w.put(',');
        w.write_uint(v.unique_nodes);
        w.put(',');
        w.write_uint(v.interval_count);
        w.newline();
    }
    w.close();
}

std::vector<VisitRow> read_visits_csv(const std::filesystem::path& path,
                                      ValidationReport* report) {
    std::vector<VisitRow> out;
    LineReader reader(path);
    std::string_view line;
    std::uint64_t malformed = 0;
    bool first = true;
    while (reader.next(line)) {
        if (first) {
            first = false;
            if (line == kVisitsHeader) continue;
        }
        if (line.empty()) continue;
        std::array<std::string_view, 6> f;
        if (!split_fields(line, f)) {
            ++malformed;
            continue;
        }
        const auto entry = parse_i64(f[1]);
        const auto exit = parse_i64(f[2]);
        const auto stay = parse_i64(f[3]);
        const auto unique = parse_i64(f[4]);
        const auto total = parse_i64(f[5]);
        if (f[0].empty() || !entry || !exit || !stay || !unique || !total || *exit < *entry ||
            *stay != *exit - *entry || *unique < 0 || *total < *unique) {
            ++malformed;
            continue;
        }
        out.push_back({std::string(f[0]), *entry, *exit, *stay, static_cast<std::uint32_t>(*unique),
                       static_cast<std::uint32_t>(*total)});
    }
    if (report) {
        report->malformed_lines += malformed;
        report->kept = out.size();
    }
    return out;
}

} // namespace dwellscope

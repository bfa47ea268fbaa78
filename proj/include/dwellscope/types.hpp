#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dwellscope {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// A sensed area around one sensor ("E", "D", "V", ...).
struct NodeId {
    std::string label;

    auto operator<=>(const NodeId&) const = default;
};

/// Salted hash of a device MAC, rendered as lowercase hex.
struct DeviceId {
    std::string hex;

    auto operator<=>(const DeviceId&) const = default;
};

/// One anonymized detection of a device by a sensor.
struct SightingEvent {
    DeviceId device;
    NodeId node;
    Timestamp timestamp = 0;
    std::optional<int> rssi;

    auto operator<=>(const SightingEvent&) const = default;
};

/// Weekday partition by closing time. Tuesdays belong to neither group
/// (museum closed) and are rejected with ErrorCode::closed_day.
enum class DayGroup {
    early_close, // Mon, Thu, Sat, Sun; closes 18:00
    late_close,  // Wed, Fri; closes 21:45
};

const char* to_string(DayGroup group);

/// The ordered set of nodes installed at a site. Node indices used by the
/// compact event/interval containers refer to positions in this set.
class Deployment {
public:
    Deployment() = default;
    explicit Deployment(std::vector<NodeId> nodes); // throws config_error on dup/empty label

    /// The eight sensors of the default deployment.
    static Deployment paper_default();

    std::size_t size() const { return nodes_.size(); }
    const std::vector<NodeId>& nodes() const { return nodes_; }
    const NodeId& node(std::uint16_t index) const { return nodes_[index]; }

    std::optional<std::uint16_t> index_of(std::string_view label) const;
    bool contains(std::string_view label) const { return index_of(label).has_value(); }

private:
    std::vector<NodeId> nodes_;
    std::unordered_map<std::string, std::uint16_t> index_;
};

} // namespace dwellscope

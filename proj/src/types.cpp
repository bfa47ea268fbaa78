#include "dwellscope/types.hpp"

#include "dwellscope/error.hpp"

namespace dwellscope {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_mac: return "InvalidMac";
    case ErrorCode::unsorted_input: return "UnsortedInput";
    case ErrorCode::empty_visit: return "EmptyVisit";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::degenerate_input: return "DegenerateInput";
    case ErrorCode::no_samples: return "NoSamples";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::flat_curve: return "FlatCurve";
    case ErrorCode::config_error: return "ConfigError";
    case ErrorCode::closed_day: return "ClosedDay";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IoError";
    }
    return "UnknownError";
}

Deployment::Deployment(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].label.empty())
            throw Error(ErrorCode::config_error, "deployment node label must be non-empty");
        const auto [it, inserted] = index_.emplace(nodes_[i].label, static_cast<std::uint16_t>(i));
        if (!inserted)
            throw Error(ErrorCode::config_error, "duplicate node label '" + nodes_[i].label + "'");
    }
}

Deployment Deployment::paper_default() {
    return Deployment{{{"E"}, {"D"}, {"V"}, {"C"}, {"P"}, {"B"}, {"S"}, {"G"}}};
}

std::optional<std::uint16_t> Deployment::index_of(std::string_view label) const {
    // transparent lookup would need a heterogeneous hash; labels are tiny
    const auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

} // namespace dwellscope

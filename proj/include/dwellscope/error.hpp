#pragma once

#include <stdexcept>
#include <string>

namespace dwellscope {

enum class ErrorCode {
    invalid_mac,
    unsorted_input,
    empty_visit,
    empty_input,
    length_mismatch,
    degenerate_input,
    no_samples,
    insufficient_data,
    flat_curve,
    config_error,
    closed_day,
    parse_error,
    io_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace dwellscope

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace poolforge {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    non_finite,
    io_failure,
    missing_file,
    bad_magic,
    truncated,
    label_out_of_range,
    already_labeled,
    index_out_of_range,
    duplicate_index,
    budget_exceeded,
    degenerate_embedding,
    single_class,
    invalid_distribution,
    empty_labeled_set,
    mismatched_grid,
    zero_variance,
    unsupported_method,
    config_error,
    missing_baseline,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. The code lets callers and tests tell failure
/// modes apart without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

}  // namespace poolforge

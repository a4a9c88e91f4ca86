#include "poolforge/error.hpp"

namespace poolforge {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid argument";
        case ErrorCode::dimension_mismatch: return "dimension mismatch";
        case ErrorCode::non_finite: return "non-finite value";
        case ErrorCode::io_failure: return "I/O failure";
        case ErrorCode::missing_file: return "missing file";
        case ErrorCode::bad_magic: return "bad magic";
        case ErrorCode::truncated: return "truncated payload";
        case ErrorCode::label_out_of_range: return "label out of range";
        case ErrorCode::already_labeled: return "index already labeled";
        case ErrorCode::index_out_of_range: return "index out of range";
        case ErrorCode::duplicate_index: return "duplicate index";
        case ErrorCode::budget_exceeded: return "budget exceeded";
        case ErrorCode::degenerate_embedding: return "degenerate embedding";
        case ErrorCode::single_class: return "single class";
        case ErrorCode::invalid_distribution: return "invalid distribution";
        case ErrorCode::empty_labeled_set: return "empty labeled set";
        case ErrorCode::mismatched_grid: return "mismatched grid";
        case ErrorCode::zero_variance: return "zero variance";
        case ErrorCode::unsupported_method: return "unsupported method";
        case ErrorCode::config_error: return "config error";
        case ErrorCode::missing_baseline: return "missing baseline";
    }
    return "unknown error";
}

}  // namespace poolforge

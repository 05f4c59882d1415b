#pragma once

#include <stdexcept>
#include <string>

namespace synthgame {

enum class Errc {
    header_mismatch,
    unknown_level,
    parse_error,
    empty_table,
    sample_too_large,
    unknown_record,
    unknown_column,
    empty_projection,
    missing_value,
    non_finite_value,
    empty_input,
    length_mismatch,
    too_few,
    bin_mismatch,
    level_mismatch,
    too_few_rows,
    schema_mismatch,
    single_class,
    dimension_mismatch,
    empty_set,
    degenerate_rate,
    invalid_count,
    invalid_argument,
    io_error,
};

const char* errc_name(Errc code);

/// Single exception type for all library errors; `code()` identifies the
/// failure class so callers and tests can dispatch without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace synthgame

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergolab {

/// Failure categories raised by the library. Each operation documents which
/// subset it can produce.
enum class errc {
    rational_input,
    insufficient_precision,
    depth_exceeded,
    not_found,
    size_limit,
    tolerance_not_met,
    undeclared_singularity,
    out_of_range,
    invalid_rate,
    horizon_exceeded,
    insufficient_samples,
    too_close_to_boundary,
    degenerate_input,
    level_too_deep,
    config_invalid,
    io_error,
    internal,
};

constexpr std::string_view to_string(errc code) noexcept {
    switch (code) {
    case errc::rational_input: return "RationalInput";
    case errc::insufficient_precision: return "InsufficientPrecision";
    case errc::depth_exceeded: return "DepthExceeded";
    case errc::not_found: return "NotFound";
    case errc::size_limit: return "SizeLimit";
    case errc::tolerance_not_met: return "ToleranceNotMet";
    case errc::undeclared_singularity: return "UndeclaredSingularity";
    case errc::out_of_range: return "OutOfRange";
    case errc::invalid_rate: return "InvalidRate";
    case errc::horizon_exceeded: return "HorizonExceeded";
    case errc::insufficient_samples: return "InsufficientSamples";
    case errc::too_close_to_boundary: return "TooCloseToBoundary";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::level_too_deep: return "LevelTooDeep";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::io_error: return "IoError";
    case errc::internal: return "Internal";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool condition, errc code, const std::string& what) {
    if (!condition) fail(code, what);
}

} // namespace ergolab

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itercanon {

enum class ErrorKind {
    base_point_mismatch,
    order_exhausted,
    singular,
    unsupported_extension,
    dimension_mismatch,
    non_commuting,
    invalid_argument,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::base_point_mismatch: return "base-point mismatch";
    case ErrorKind::order_exhausted: return "order exhausted";
    case ErrorKind::singular: return "singular";
    case ErrorKind::unsupported_extension: return "unsupported extension";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::non_commuting: return "non-commuting";
    case ErrorKind::invalid_argument: return "invalid argument";
    }
    return "unknown";
}

/// Domain failure raised by the engine (singularity, order exhaustion, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace itercanon

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semtag {

enum class ErrorCode {
    NotFound,
    Validation,
    InsufficientData,
    DegenerateGeometry,
    OutOfRange,
    ProviderUnavailable,
    DegenerateTable,
    InvalidMatrix,
    Unsupported,
    Conflict,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Domain error carrying a machine-readable code; the service maps codes to HTTP statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace semtag

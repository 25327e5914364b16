#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fibersim {

enum class ErrorCode {
    SingularMatrix,
    InadmissibleConfig,
    InvalidParameters,
    BasePointMismatch,
    NonFiniteState,
    FiberMismatch,
    DegenerateGeometry,
    InvalidPath,
    MalformedScenario,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fibersim

#pragma once

#include <stdexcept>
#include <string>

namespace patchdyn {

// All failures surface as typed exceptions so callers can map them to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveJacobian : Error {
    explicit NonPositiveJacobian(const std::string& m) : Error(m) {}
};
struct DerivativeMismatch : Error {
    explicit DerivativeMismatch(const std::string& m) : Error(m) {}
};
struct MixedTermUnsupported : Error {
    explicit MixedTermUnsupported(const std::string& m) : Error(m) {}
};
struct StabilityViolation : Error {
    explicit StabilityViolation(const std::string& m) : Error(m) {}
};
struct InsufficientStencil : Error {
    explicit InsufficientStencil(const std::string& m) : Error(m) {}
};
struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& m) : Error(m) {}
};
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& m) : Error(m) {}
};
struct InvalidStretch : Error {
    explicit InvalidStretch(const std::string& m) : Error(m) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(m) {}
};
struct RootBracketFailure : Error {
    explicit RootBracketFailure(const std::string& m) : Error(m) {}
};
struct GridMismatch : Error {
    explicit GridMismatch(const std::string& m) : Error(m) {}
};
struct MacroInstability : Error {
    explicit MacroInstability(const std::string& m) : Error(m) {}
};
// A microsim failure annotated with the patch that raised it.
struct MacroPatchError : Error {
    explicit MacroPatchError(const std::string& m) : Error(m) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(m) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(m) {}
};
struct IOError : Error {
    explicit IOError(const std::string& m) : Error(m) {}
};

} // namespace patchdyn

#ifndef ROUNDREACH_ERROR_HPP
#define ROUNDREACH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace roundreach {

enum class ErrorCode {
    InvalidArgument,
    Parse,
    OrderMismatch,
    NotReal,
    ZeroInput,
    ModulusOne,
    Singular,
    ValidationFailed,
    NonrationalSpectrum,
    UnsupportedAngle,
    UnsupportedCombination,
    GadgetBroken,
    NonCanonicalPrefix,
    TooLarge,
    UndecidableTie,
    Io,
    Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

// Internal consistency checks that encode proven facts; a failure is a bug.
inline void ensure(bool condition, const char* what)
{
    if (!condition) {
        throw Error(ErrorCode::Internal, std::string("internal invariant violated: ") + what);
    }
}

inline void ensure(bool condition, const std::string& what)
{
    ensure(condition, what.c_str());
}

} // namespace roundreach

#endif

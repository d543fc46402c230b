#pragma once

#include <stdexcept>
#include <string>

namespace gapkit {

/// Broad failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    InvalidArgument,  // violated precondition on caller-supplied values
    Domain,           // abscissa or parameter outside the admissible domain
    Convergence,      // bracketing, root finding or optimisation gave up
    Io,               // unreadable or unwritable file
    Format,           // malformed JSON descriptor
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace gapkit

#pragma once

#include <stdexcept>
#include <string>

namespace clearsim {

enum class ErrorKind {
    Domain,      // argument outside the mathematical domain of an operation
    Degenerate,  // tier structure cannot be built or split
    Input,       // inconsistent or empty inputs
    Config,      // invalid configuration document or CLI flags
    Io,          // filesystem failures
    Convergence, // iteration cap hit
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace clearsim

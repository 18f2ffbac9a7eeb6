#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

enum class ErrorKind {
    Config,       // invalid input or configuration
    Singular,     // evaluation at a coulomb singularity
    Divergent,    // matrix element or integral that does not exist
    Numeric,      // linear solve / eigen solver / quadrature failure
    Convergence,  // iteration limit reached
    Leakage,      // basis truncation exceeded
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qbm

#pragma once

#include <stdexcept>
#include <string>

namespace kac {

// Thrown when a requested exact computation would exceed the configured
// memory/enumeration guards.  CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a request is provably infeasible (e.g. a lattice point ruled
// out by a parity certificate).  CLI maps this to exit code 2.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, const std::string& certificate)
        : std::runtime_error(what), certificate_(certificate) {}
    const std::string& certificate() const { return certificate_; }

private:
    std::string certificate_;
};

} // namespace kac

#pragma once
// fsqkd/errors.hpp - Error taxonomy shared by all modules.
//
// ConfigError: malformed or inconsistent inputs (files, scenario values,
//              violated type invariants). CLI maps these to exit code 2.
// DomainError: valid configuration driven outside an operation's domain
//              (out-of-range wavelength, saturated background probability,
//              empty click denominator, ...). CLI maps these to exit code 3.

#include <stdexcept>
#include <string>

namespace fsqkd {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fsqkd

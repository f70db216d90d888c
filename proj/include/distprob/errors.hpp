#pragma once

#include <stdexcept>
#include <string>

namespace distprob {

/// Invalid arguments or malformed input data.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate distribution fits (zero spread, zero mean).
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace distprob

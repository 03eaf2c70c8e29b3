#pragma once

#include <stdexcept>
#include <string>

namespace ccrp {

// Bad user input: malformed config file, out-of-range probability, unknown
// preset. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A broken internal invariant (a probability left [0,1], an inconsistent
// table after construction). The CLI maps this to exit code 3.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

} // namespace ccrp

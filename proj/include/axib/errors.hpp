#pragma once

#include <stdexcept>
#include <string>

namespace axib {

// Error taxonomy mirrors the CLI exit codes: configuration problems exit 2,
// numerical divergence exits 3, everything else is a plain check failure.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct divergence_error : std::runtime_error {
    explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace axib

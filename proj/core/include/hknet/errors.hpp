#pragma once

#include <stdexcept>
#include <string>

namespace hknet {

// Bad configuration, flags, config-file contents or layout files. The CLI
// maps this (and std::invalid_argument) to exit code 2.
struct invalid_config_error : std::runtime_error {
    explicit invalid_config_error(const std::string& what) : std::runtime_error(what) {}
};

// A placement request that cannot be satisfied (more small cells than grid
// candidates, or a user that never lands in the allowed annulus). Exit code 3.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hknet

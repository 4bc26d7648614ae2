// Experiment runners behind the CLI: single-instance rate reports, the
// interference-mode map, the SAP-distance sum-rate sweep, and the K-cell
// throughput scaling study. Each writes one CSV (comment header with the
// resolved configuration, then a columns line, then data rows) to a stream.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hknet/geometry.hpp"

namespace hknet {

struct ExperimentConfig {
    NetworkConfig net{};
    std::uint64_t seed = 0;
    int threads = 1;  // execution policy only; never changes output bytes
    std::optional<Direction> direction;

    // rate: exactly one of gains / snrs / layout_path selects the instance
    std::optional<std::array<double, 4>> gains;  // g11, g12, g21, g22
    std::optional<std::array<double, 4>> snrs;   // snr1, snr2, inr1, inr2
    double p1_mw = 1.0, p2_mw = 1.0, n0_mw = 1.0;
    std::string layout_path;
    std::string scheme = "hk";  // hk | oracle | etw | tin | orthogonal
    int grid_n = 512;           // oracle grid resolution

    // mode map
    int resolution = 101;
    double sap_x_m = 300.0, sap_y_m = 300.0;
    double sue_offset_m = 40.0, sue_angle_deg = 0.0;

    // sweep
    int steps = 200;
    double d_min_m = 35.0, d_max_m = 500.0;
    double mue_x_m = 80.0, mue_y_m = 0.0;

    // kcell
    int kmax = 10;
    int trials = 100;
};

// Merges `key = value` lines (with '#' comments) into cfg; unknown keys and
// malformed values raise invalid_config_error.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

std::optional<Direction> direction_from_string(std::string_view name);
std::string_view to_string(Direction dir);

void run_rate(const ExperimentConfig& cfg, std::ostream& out);
void run_mode_map(const ExperimentConfig& cfg, std::ostream& out);
void run_sweep(const ExperimentConfig& cfg, std::ostream& out);
void run_kcell(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace hknet

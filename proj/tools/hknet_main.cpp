// hknet command line: rate | mode-map | sweep | kcell. Precedence is
// built-in defaults, then --config file contents, then explicit flags.
// Exit codes: 0 ok, 2 bad flags/config/layout, 3 infeasible placement.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hknet/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string direction;
    std::uint64_t seed = 0;
    int threads = 1;
};

void add_common(CLI::App* sub, CommonFlags& c) {
    sub->add_option("--config", c.config_path, "configuration file with 'key = value' lines");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--out", c.out_path, "output CSV path (default: stdout)");
    sub->add_option("--direction", c.direction, "downlink or uplink")
        ->check(CLI::IsMember({"downlink", "uplink"}));
    sub->add_option("--threads", c.threads, "worker threads; never changes output bytes")
        ->check(CLI::PositiveNumber);
}

hknet::ExperimentConfig build_config(CLI::App* sub, const CommonFlags& c) {
    hknet::ExperimentConfig cfg;
    if (sub->count("--config") > 0) hknet::apply_config_file(cfg, c.config_path);
    if (sub->count("--seed") > 0) cfg.seed = c.seed;
    if (sub->count("--threads") > 0) cfg.threads = c.threads;
    if (sub->count("--direction") > 0) cfg.direction = *hknet::direction_from_string(c.direction);
    return cfg;
}

using Runner = void (*)(const hknet::ExperimentConfig&, std::ostream&);

void run_to(const hknet::ExperimentConfig& cfg, const std::string& out_path, Runner fn) {
    if (out_path.empty()) {
        fn(cfg, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw hknet::invalid_config_error("cannot open output file: " + out_path);
    fn(cfg, out);
    out.flush();
    if (!out) throw hknet::invalid_config_error("failed writing output file: " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-user interference-channel power splitting and small-cell network studies"};
    app.require_subcommand(1);

    CommonFlags c_rate, c_map, c_sweep, c_kcell;

    CLI::App* rate = app.add_subcommand("rate", "sum rate of a single channel instance");
    add_common(rate, c_rate);
    std::vector<double> gains, snrs;
    double p1 = 1.0, p2 = 1.0, n0 = 1.0;
    std::string rate_layout, scheme;
    int grid_n = 512;
    rate->add_option("--gains", gains, "direct/cross power gains g11,g12,g21,g22")
        ->delimiter(',')
        ->expected(4);
    rate->add_option("--snrs", snrs, "target ratios snr1,snr2,inr1,inr2")
        ->delimiter(',')
        ->expected(4);
    rate->add_option("--p1", p1, "transmit power 1 in mW (with --gains)");
    rate->add_option("--p2", p2, "transmit power 2 in mW (with --gains)");
    rate->add_option("--n0", n0, "noise power in mW (with --gains)");
    rate->add_option("--layout", rate_layout, "layout file with one MUE and one SAP/SUE pair");
    rate->add_option("--scheme", scheme, "hk | oracle | etw | tin | orthogonal")
        ->check(CLI::IsMember({"hk", "oracle", "etw", "tin", "orthogonal"}));
    rate->add_option("--grid", grid_n, "oracle grid resolution per axis")
        ->check(CLI::Range(2, 1 << 16));

    CLI::App* map = app.add_subcommand("mode-map", "interference mode over macro user positions");
    add_common(map, c_map);
    std::string map_layout;
    int resolution = 101;
    map->add_option("--layout", map_layout, "layout file with one MUE and one SAP/SUE pair");
    map->add_option("--resolution", resolution, "grid points per axis")->check(CLI::Range(2, 1 << 16));

    CLI::App* sweep = app.add_subcommand("sweep", "sum rate versus SAP distance from the macro BS");
    add_common(sweep, c_sweep);
    int steps = 200;
    sweep->add_option("--steps", steps, "number of distances")->check(CLI::Range(2, 1 << 24));

    CLI::App* kcell = app.add_subcommand("kcell", "mean throughput versus small-cell count");
    add_common(kcell, c_kcell);
    int kmax = 10, trials = 100;
    kcell->add_option("--kmax", kmax, "largest small-cell count")->check(CLI::PositiveNumber);
    kcell->add_option("--trials", trials, "random layouts per count")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (rate->parsed()) {
            hknet::ExperimentConfig cfg = build_config(rate, c_rate);
            if (rate->count("--gains") > 0) cfg.gains = {{gains[0], gains[1], gains[2], gains[3]}};
            if (rate->count("--snrs") > 0) cfg.snrs = {{snrs[0], snrs[1], snrs[2], snrs[3]}};
            if (rate->count("--p1") > 0) cfg.p1_mw = p1;
            if (rate->count("--p2") > 0) cfg.p2_mw = p2;
            if (rate->count("--n0") > 0) cfg.n0_mw = n0;
            if (rate->count("--layout") > 0) cfg.layout_path = rate_layout;
            if (rate->count("--scheme") > 0) cfg.scheme = scheme;
            if (rate->count("--grid") > 0) cfg.grid_n = grid_n;
            run_to(cfg, c_rate.out_path, hknet::run_rate);
        } else if (map->parsed()) {
            hknet::ExperimentConfig cfg = build_config(map, c_map);
            if (map->count("--layout") > 0) cfg.layout_path = map_layout;
            if (map->count("--resolution") > 0) cfg.resolution = resolution;
            run_to(cfg, c_map.out_path, hknet::run_mode_map);
        } else if (sweep->parsed()) {
            hknet::ExperimentConfig cfg = build_config(sweep, c_sweep);
            if (sweep->count("--steps") > 0) cfg.steps = steps;
            run_to(cfg, c_sweep.out_path, hknet::run_sweep);
        } else {
            hknet::ExperimentConfig cfg = build_config(kcell, c_kcell);
            if (kcell->count("--kmax") > 0) cfg.kmax = kmax;
            if (kcell->count("--trials") > 0) cfg.trials = trials;
            run_to(cfg, c_kcell.out_path, hknet::run_kcell);
        }
    } catch (const hknet::infeasible_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hknet::invalid_config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "hknet/experiments.hpp"

#include <array>
#include <atomic>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hknet/optimizer.hpp"
#include "hknet/rng.hpp"

namespace hknet {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void kv(std::ostream& out, const char* key, const std::string& val) {
    out << "# " << key << " = " << val << "\n";
}
void kv(std::ostream& out, const char* key, double v) { kv(out, key, fmt6(v)); }
void kv(std::ostream& out, const char* key, int v) { kv(out, key, std::to_string(v)); }
void kv(std::ostream& out, const char* key, std::uint64_t v) { kv(out, key, std::to_string(v)); }

void emit_net(std::ostream& out, const NetworkConfig& net) {
    kv(out, "mbs_power_dbm", net.mbs_power_dbm);
    kv(out, "sap_power_dbm", net.sap_power_dbm);
    kv(out, "ue_power_dbm", net.ue_power_dbm);
    kv(out, "cell_radius_m", net.cell_radius_m);
    kv(out, "edge_snr_db", net.edge_snr_db);
    kv(out, "small_cell_radius_m", net.small_cell_radius_m);
    kv(out, "min_mbs_distance_m", net.min_mbs_distance_m);
    kv(out, "grid_spacing_m", net.grid_spacing_m);
    kv(out, "noise_dbm", calibrate_noise(net));
}

// Index-gathered work sharing: results land in caller-owned slots, so the
// worker count changes wall time but never output bytes.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, n);
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& path, int lineno, const std::string& what) {
    throw invalid_config_error(path + ":" + std::to_string(lineno) + ": " + what);
}

double parse_f64(const std::string& path, int lineno, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || !std::isfinite(x))
        config_error(path, lineno, "not a finite number: '" + v + "'");
    return x;
}

int parse_int(const std::string& path, int lineno, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || x < INT_MIN || x > INT_MAX)
        config_error(path, lineno, "not an integer: '" + v + "'");
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& path, int lineno, const std::string& v) {
    if (v.empty() || v[0] == '-') config_error(path, lineno, "not an unsigned integer: '" + v + "'");
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size())
        config_error(path, lineno, "not an unsigned integer: '" + v + "'");
    return x;
}

void check_annulus(Position p, const NetworkConfig& net, const char* what) {
    const double d = std::hypot(p.x_m, p.y_m);
    if (d < net.min_mbs_distance_m || d > net.cell_radius_m)
        throw invalid_config_error(std::string(what) +
                                   " must lie between min_mbs_distance_m and cell_radius_m");
}

Position offset_position(Position base, double offset_m, double angle_deg) {
    const double a = angle_deg * kPi / 180.0;
    return {base.x_m + offset_m * std::cos(a), base.y_m + offset_m * std::sin(a)};
}

// K-cell baselines. Orthogonal: the macro link gets an interference-free
// half slot, the small cells share the other half among themselves. TIN:
// everyone transmits at once and every receiver treats all cross power as
// noise. Both downlink, matching the coordinated scheme they are compared to.
double kcell_orthogonal(const NetworkLayout& lo, const NetworkConfig& net) {
    const Position origin{0.0, 0.0};
    const double n0 = noise_mw(net);
    const double pm = dbm_to_mw(net.mbs_power_dbm), ps = dbm_to_mw(net.sap_power_dbm);
    double r = 0.5 * log2_1p(channel_gain(LinkKind::mbs_to_ue, distance(lo.mue, origin)) * pm / n0);
    for (std::size_t k = 0; k < lo.saps.size(); ++k) {
        double den = n0;
        for (std::size_t j = 0; j < lo.saps.size(); ++j)
            if (j != k)
                den += channel_gain(LinkKind::sap_to_ue, distance(lo.sues[k], lo.saps[j])) * ps;
        r += 0.5 *
             log2_1p(channel_gain(LinkKind::sap_to_ue, distance(lo.sues[k], lo.saps[k])) * ps / den);
    }
    return r;
}

double kcell_tin(const NetworkLayout& lo, const NetworkConfig& net) {
    const Position origin{0.0, 0.0};
    const double n0 = noise_mw(net);
    const double pm = dbm_to_mw(net.mbs_power_dbm), ps = dbm_to_mw(net.sap_power_dbm);
    double den_m = n0;
    for (const Position& sap : lo.saps)
        den_m += channel_gain(LinkKind::sap_to_ue, distance(lo.mue, sap)) * ps;
    double r = log2_1p(channel_gain(LinkKind::mbs_to_ue, distance(lo.mue, origin)) * pm / den_m);
    for (std::size_t k = 0; k < lo.saps.size(); ++k) {
        double den = n0 + channel_gain(LinkKind::mbs_to_ue, distance(lo.sues[k], origin)) * pm;
        for (std::size_t j = 0; j < lo.saps.size(); ++j)
            if (j != k)
                den += channel_gain(LinkKind::sap_to_ue, distance(lo.sues[k], lo.saps[j])) * ps;
        r += log2_1p(channel_gain(LinkKind::sap_to_ue, distance(lo.sues[k], lo.saps[k])) * ps / den);
    }
    return r;
}

}  // namespace

std::string_view to_string(Direction dir) {
    return dir == Direction::downlink ? "downlink" : "uplink";
}

std::optional<Direction> direction_from_string(std::string_view name) {
    if (name == "downlink") return Direction::downlink;
    if (name == "uplink") return Direction::uplink;
    return std::nullopt;
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_config_error("cannot open config file: " + path);

    std::optional<double> g[4], s[4];
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) config_error(path, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) config_error(path, lineno, "expected 'key = value'");

        auto f64 = [&] { return parse_f64(path, lineno, val); };
        auto i32 = [&] { return parse_int(path, lineno, val); };

        if (key == "mbs_power_dbm") cfg.net.mbs_power_dbm = f64();
        else if (key == "sap_power_dbm") cfg.net.sap_power_dbm = f64();
        else if (key == "ue_power_dbm") cfg.net.ue_power_dbm = f64();
        else if (key == "cell_radius_m") cfg.net.cell_radius_m = f64();
        else if (key == "edge_snr_db") cfg.net.edge_snr_db = f64();
        else if (key == "small_cell_radius_m") cfg.net.small_cell_radius_m = f64();
        else if (key == "min_mbs_distance_m") cfg.net.min_mbs_distance_m = f64();
        else if (key == "grid_spacing_m") cfg.net.grid_spacing_m = f64();
        else if (key == "seed") cfg.seed = parse_u64(path, lineno, val);
        else if (key == "direction") {
            const auto dir = direction_from_string(val);
            if (!dir) config_error(path, lineno, "direction must be downlink or uplink");
            cfg.direction = *dir;
        } else if (key == "scheme") cfg.scheme = val;
        else if (key == "layout") cfg.layout_path = val;
        else if (key == "grid_n") cfg.grid_n = i32();
        else if (key == "resolution") cfg.resolution = i32();
        else if (key == "steps") cfg.steps = i32();
        else if (key == "trials") cfg.trials = i32();
        else if (key == "kmax") cfg.kmax = i32();
        else if (key == "d_min_m") cfg.d_min_m = f64();
        else if (key == "d_max_m") cfg.d_max_m = f64();
        else if (key == "mue_x_m") cfg.mue_x_m = f64();
        else if (key == "mue_y_m") cfg.mue_y_m = f64();
        else if (key == "sap_x_m") cfg.sap_x_m = f64();
        else if (key == "sap_y_m") cfg.sap_y_m = f64();
        else if (key == "sue_offset_m") cfg.sue_offset_m = f64();
        else if (key == "sue_angle_deg") cfg.sue_angle_deg = f64();
        else if (key == "p1_mw") cfg.p1_mw = f64();
        else if (key == "p2_mw") cfg.p2_mw = f64();
        else if (key == "n0_mw") cfg.n0_mw = f64();
        else if (key == "g11") g[0] = f64();
        else if (key == "g12") g[1] = f64();
        else if (key == "g21") g[2] = f64();
        else if (key == "g22") g[3] = f64();
        else if (key == "snr1") s[0] = f64();
        else if (key == "snr2") s[1] = f64();
        else if (key == "inr1") s[2] = f64();
        else if (key == "inr2") s[3] = f64();
        else config_error(path, lineno, "unknown config key '" + key + "'");
    }

    if (g[0] || g[1] || g[2] || g[3]) {
        if (!(g[0] && g[1] && g[2] && g[3]))
            throw invalid_config_error(path + ": g11, g12, g21, g22 must be given together");
        cfg.gains = {{*g[0], *g[1], *g[2], *g[3]}};
    }
    if (s[0] || s[1] || s[2] || s[3]) {
        if (!(s[0] && s[1] && s[2] && s[3]))
            throw invalid_config_error(path + ": snr1, snr2, inr1, inr2 must be given together");
        cfg.snrs = {{*s[0], *s[1], *s[2], *s[3]}};
    }
}

void run_rate(const ExperimentConfig& cfg, std::ostream& out) {
    const int picked =
        (cfg.gains ? 1 : 0) + (cfg.snrs ? 1 : 0) + (cfg.layout_path.empty() ? 0 : 1);
    if (picked != 1)
        throw invalid_config_error("rate needs exactly one of gains, snrs or a layout");

    ChannelGains g{};
    PowerBudget b{};
    out << "# hknet rate\n";
    if (cfg.gains) {
        const auto& a = *cfg.gains;
        g = {a[0], a[1], a[2], a[3]};
        b = {cfg.p1_mw, cfg.p2_mw, cfg.n0_mw};
        kv(out, "g11", g.g11);
        kv(out, "g12", g.g12);
        kv(out, "g21", g.g21);
        kv(out, "g22", g.g22);
        kv(out, "p1_mw", b.p1);
        kv(out, "p2_mw", b.p2);
        kv(out, "n0_mw", b.n0);
    } else if (cfg.snrs) {
        // unit powers and unit noise make the gains equal the target ratios
        const auto& a = *cfg.snrs;
        g = {a[0], a[2], a[3], a[1]};
        b = {1.0, 1.0, 1.0};
        kv(out, "snr1", a[0]);
        kv(out, "snr2", a[1]);
        kv(out, "inr1", a[2]);
        kv(out, "inr2", a[3]);
    } else {
        const Direction dir = cfg.direction.value_or(Direction::downlink);
        NetworkLayout lo = load_layout(cfg.layout_path, cfg.net);
        if (lo.saps.size() != 1)
            throw invalid_config_error("rate over a layout needs exactly one SAP/SUE pair");
        const TwoUserChannel tu = two_user_channel(lo.mue, lo.saps[0], lo.sues[0], cfg.net, dir);
        g = tu.gains;
        b = tu.budget;
        emit_net(out, cfg.net);
        kv(out, "layout", cfg.layout_path);
        kv(out, "direction", std::string(to_string(dir)));
    }
    kv(out, "scheme", cfg.scheme);
    if (cfg.scheme == "oracle") kv(out, "grid_n", cfg.grid_n);
    out << "# columns: mode,p1p,p2p,sum_rate\n";

    const LinkBudget lb = link_budget(g, b);
    if (cfg.scheme == "hk") {
        const AllocationResult r = optimize(g, b);
        out << to_string(r.mode) << ',' << fmt6(r.split.p1p) << ',' << fmt6(r.split.p2p) << ','
            << fmt6(r.sum_rate) << "\n";
    } else if (cfg.scheme == "oracle") {
        const AllocationResult r = brute_force_split(g, b, cfg.grid_n);
        out << to_string(r.mode) << ',' << fmt6(r.split.p1p) << ',' << fmt6(r.split.p2p) << ','
            << fmt6(r.sum_rate) << "\n";
    } else if (cfg.scheme == "etw") {
        const PowerSplit sp = etw_split(g, b);
        out << to_string(classify_mode(lb)) << ',' << fmt6(sp.p1p) << ',' << fmt6(sp.p2p) << ','
            << fmt6(split_sum_rate(g, b, sp)) << "\n";
    } else if (cfg.scheme == "tin") {
        out << to_string(classify_mode(lb)) << ',' << fmt6(b.p1) << ',' << fmt6(b.p2) << ','
            << fmt6(baseline_rates(g, b).tin) << "\n";
    } else if (cfg.scheme == "orthogonal") {
        // time sharing has no private/common split; those fields stay empty
        out << to_string(classify_mode(lb)) << ",,," << fmt6(baseline_rates(g, b).orthogonal)
            << "\n";
    } else {
        throw invalid_config_error("unknown scheme '" + cfg.scheme + "'");
    }
}

void run_mode_map(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.resolution < 2) throw invalid_config_error("resolution must be at least 2");
    validate(cfg.net);
    const Direction dir = cfg.direction.value_or(Direction::downlink);

    Position sap{}, sue{};
    if (!cfg.layout_path.empty()) {
        const NetworkLayout lo = load_layout(cfg.layout_path, cfg.net);
        if (lo.saps.size() != 1)
            throw invalid_config_error("mode map needs exactly one SAP/SUE pair");
        sap = lo.saps[0];
        sue = lo.sues[0];
    } else {
        sap = {cfg.sap_x_m, cfg.sap_y_m};
        sue = offset_position(sap, cfg.sue_offset_m, cfg.sue_angle_deg);
        check_annulus(sap, cfg.net, "SAP");
        check_annulus(sue, cfg.net, "SUE");
    }

    out << "# hknet mode-map\n";
    emit_net(out, cfg.net);
    kv(out, "direction", std::string(to_string(dir)));
    kv(out, "resolution", cfg.resolution);
    if (!cfg.layout_path.empty()) {
        kv(out, "layout", cfg.layout_path);
    } else {
        kv(out, "sap_x_m", cfg.sap_x_m);
        kv(out, "sap_y_m", cfg.sap_y_m);
        kv(out, "sue_offset_m", cfg.sue_offset_m);
        kv(out, "sue_angle_deg", cfg.sue_angle_deg);
    }
    out << "# columns: x,y,mode\n";

    const int res = cfg.resolution;
    const double radius = cfg.net.cell_radius_m;
    std::vector<std::string> scanlines(res);
    parallel_for(res, cfg.threads, [&](int iy) {
        const double y = -radius + 2.0 * radius * (double(iy) / (res - 1));
        std::string& row = scanlines[iy];
        for (int ix = 0; ix < res; ++ix) {
            const double x = -radius + 2.0 * radius * (double(ix) / (res - 1));
            const double d = std::hypot(x, y);
            row += fmt6(x);
            row += ',';
            row += fmt6(y);
            row += ',';
            if (d < cfg.net.min_mbs_distance_m || d > radius) {
                row += "invalid";
            } else {
                const TwoUserChannel tu = two_user_channel({x, y}, sap, sue, cfg.net, dir);
                row += to_string(classify_mode(link_budget(tu.gains, tu.budget)));
            }
            row += '\n';
        }
    });
    for (const std::string& row : scanlines) out << row;
}

void run_sweep(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.steps < 2) throw invalid_config_error("steps must be at least 2");
    if (!(cfg.d_min_m > 0.0) || !(cfg.d_max_m > cfg.d_min_m))
        throw invalid_config_error("need 0 < d_min_m < d_max_m");
    validate(cfg.net);
    const Direction dir = cfg.direction.value_or(Direction::uplink);
    const Position mue{cfg.mue_x_m, cfg.mue_y_m};
    check_annulus(mue, cfg.net, "MUE");

    out << "# hknet sweep\n";
    emit_net(out, cfg.net);
    kv(out, "direction", std::string(to_string(dir)));
    kv(out, "steps", cfg.steps);
    kv(out, "d_min_m", cfg.d_min_m);
    kv(out, "d_max_m", cfg.d_max_m);
    kv(out, "mue_x_m", cfg.mue_x_m);
    kv(out, "mue_y_m", cfg.mue_y_m);
    kv(out, "sue_offset_m", cfg.sue_offset_m);
    kv(out, "sue_angle_deg", cfg.sue_angle_deg);
    out << "# columns: d,mode,r_hk,r_etw,r_tin,r_orth\n";

    std::vector<std::string> rows(cfg.steps);
    parallel_for(cfg.steps, cfg.threads, [&](int i) {
        const double d = cfg.d_min_m + (cfg.d_max_m - cfg.d_min_m) * (double(i) / (cfg.steps - 1));
        const Position sap{d, 0.0};
        const Position sue = offset_position(sap, cfg.sue_offset_m, cfg.sue_angle_deg);
        const TwoUserChannel tu = two_user_channel(mue, sap, sue, cfg.net, dir);
        const AllocationResult r = optimize(tu.gains, tu.budget);
        const double r_etw = split_sum_rate(tu.gains, tu.budget, etw_split(tu.gains, tu.budget));
        const BaselineRates bl = baseline_rates(tu.gains, tu.budget);
        std::string row = fmt6(d);
        row += ',';
        row += to_string(r.mode);
        row += ',';
        row += fmt6(r.sum_rate);
        row += ',';
        row += fmt6(r_etw);
        row += ',';
        row += fmt6(bl.tin);
        row += ',';
        row += fmt6(bl.orthogonal);
        row += '\n';
        rows[i] = std::move(row);
    });
    for (const std::string& row : rows) out << row;
}

void run_kcell(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.kmax < 1) throw invalid_config_error("kmax must be at least 1");
    if (cfg.trials < 1) throw invalid_config_error("trials must be at least 1");
    if (cfg.direction && *cfg.direction == Direction::uplink)
        throw invalid_config_error("kcell is a downlink study");
    validate(cfg.net);
    const Position mue{2.0 * cfg.net.cell_radius_m / 3.0, 0.0};

    out << "# hknet kcell\n";
    emit_net(out, cfg.net);
    kv(out, "seed", cfg.seed);
    kv(out, "kmax", cfg.kmax);
    kv(out, "trials", cfg.trials);
    kv(out, "mue_x_m", mue.x_m);
    kv(out, "mue_y_m", mue.y_m);
    out << "# columns: K,r_ass_mean,r_orth_mean,r_tin_mean\n";

    const int n = cfg.kmax * cfg.trials;
    std::vector<std::array<double, 3>> results(n);
    parallel_for(n, cfg.threads, [&](int idx) {
        const int K = idx / cfg.trials + 1;
        const int t = idx % cfg.trials;
        const std::vector<Position> saps =
            place_saps_grid(cfg.net, K, derive_seed(cfg.seed, K, t, 0));
        std::vector<Position> sues;
        sues.reserve(saps.size());
        for (std::size_t k = 0; k < saps.size(); ++k)
            sues.push_back(place_sue(saps[k], cfg.net, derive_seed(cfg.seed, K, t, k + 1)));
        const NetworkLayout lo{mue, saps, sues, Direction::downlink};
        results[idx] = {network_throughput(lo, cfg.net).total, kcell_orthogonal(lo, cfg.net),
                        kcell_tin(lo, cfg.net)};
    });

    for (int K = 1; K <= cfg.kmax; ++K) {
        double sums[3] = {0.0, 0.0, 0.0};
        for (int t = 0; t < cfg.trials; ++t)
            for (int c = 0; c < 3; ++c) sums[c] += results[(K - 1) * cfg.trials + t][c];
        out << K << ',' << fmt6(sums[0] / cfg.trials) << ',' << fmt6(sums[1] / cfg.trials) << ','
            << fmt6(sums[2] / cfg.trials) << "\n";
    }
}

}  // namespace hknet

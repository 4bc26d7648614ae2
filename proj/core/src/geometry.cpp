#include "hknet/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "hknet/rng.hpp"

namespace hknet {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinProbeDistance_m = 1e-3;

double checked_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw invalid_config_error(std::string(what) + " must be finite");
    return v;
}

[[noreturn]] void layout_error(int lineno, const std::string& what) {
    throw invalid_config_error("layout line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

double path_loss_db(LinkKind kind, double distance_m) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("path loss needs a positive distance");
    const double lg = std::log10(distance_m);
    return kind == LinkKind::mbs_to_ue ? 15.3 + 37.6 * lg : 30.6 + 36.7 * lg;
}

double channel_gain(LinkKind kind, double distance_m) {
    return std::pow(10.0, -path_loss_db(kind, distance_m) / 10.0);
}

double calibrate_noise(const NetworkConfig& cfg) {
    validate(cfg);
    return cfg.mbs_power_dbm - path_loss_db(LinkKind::mbs_to_ue, cfg.cell_radius_m) -
           cfg.edge_snr_db;
}

void validate(const NetworkConfig& cfg) {
    checked_finite(cfg.mbs_power_dbm, "mbs_power_dbm");
    checked_finite(cfg.sap_power_dbm, "sap_power_dbm");
    checked_finite(cfg.ue_power_dbm, "ue_power_dbm");
    checked_finite(cfg.edge_snr_db, "edge_snr_db");
    if (!(checked_finite(cfg.cell_radius_m, "cell_radius_m") > 0.0))
        throw invalid_config_error("cell_radius_m must be positive");
    if (!(checked_finite(cfg.small_cell_radius_m, "small_cell_radius_m") > 0.0))
        throw invalid_config_error("small_cell_radius_m must be positive");
    if (!(checked_finite(cfg.min_mbs_distance_m, "min_mbs_distance_m") > 0.0) ||
        cfg.min_mbs_distance_m >= cfg.cell_radius_m)
        throw invalid_config_error("min_mbs_distance_m must lie in (0, cell_radius_m)");
    if (!(checked_finite(cfg.grid_spacing_m, "grid_spacing_m") > 0.0))
        throw invalid_config_error("grid_spacing_m must be positive");
}

void validate(const NetworkLayout& layout, const NetworkConfig& cfg) {
    validate(cfg);
    if (layout.saps.size() != layout.sues.size())
        throw invalid_config_error("layout needs one SUE per SAP, in order");
    if (layout.saps.empty()) throw invalid_config_error("layout needs at least one SAP/SUE pair");

    const Position origin{0.0, 0.0};
    auto check_annulus = [&](Position p, const char* what) {
        const double d = distance(p, origin);
        if (d < cfg.min_mbs_distance_m || d > cfg.cell_radius_m)
            throw invalid_config_error(std::string(what) +
                                       " must lie between min_mbs_distance_m and cell_radius_m");
    };
    check_annulus(layout.mue, "MUE");
    for (const Position& p : layout.saps) check_annulus(p, "SAP");
    for (const Position& p : layout.sues) check_annulus(p, "SUE");
    for (std::size_t k = 0; k < layout.saps.size(); ++k) {
        const double d = distance(layout.sues[k], layout.saps[k]);
        if (d > cfg.small_cell_radius_m)
            throw invalid_config_error("SUE must lie within small_cell_radius_m of its SAP");
    }

    std::vector<Position> nodes;
    nodes.push_back(layout.mue);
    nodes.insert(nodes.end(), layout.saps.begin(), layout.saps.end());
    nodes.insert(nodes.end(), layout.sues.begin(), layout.sues.end());
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            if (distance(nodes[a], nodes[b]) == 0.0)
                throw invalid_config_error("layout nodes must occupy distinct positions");
}

TwoUserChannel two_user_channel(Position mue, Position sap, Position sue,
                                const NetworkConfig& cfg, Direction dir) {
    validate(cfg);
    const Position origin{0.0, 0.0};
    auto gain = [](LinkKind kind, double d) {
        return channel_gain(kind, std::max(d, kMinProbeDistance_m));
    };
    const double n0 = noise_mw(cfg);
    if (dir == Direction::downlink) {
        return {{gain(LinkKind::mbs_to_ue, distance(mue, origin)),
                 gain(LinkKind::sap_to_ue, distance(mue, sap)),
                 gain(LinkKind::mbs_to_ue, distance(sue, origin)),
                 gain(LinkKind::sap_to_ue, distance(sue, sap))},
                {dbm_to_mw(cfg.mbs_power_dbm), dbm_to_mw(cfg.sap_power_dbm), n0}};
    }
    const double pu = dbm_to_mw(cfg.ue_power_dbm);
    return {{gain(LinkKind::mbs_to_ue, distance(mue, origin)),
             gain(LinkKind::mbs_to_ue, distance(sue, origin)),
             gain(LinkKind::sap_to_ue, distance(mue, sap)),
             gain(LinkKind::sap_to_ue, distance(sue, sap))},
            {pu, pu, n0}};
}

PairBudget pair_budget(const NetworkLayout& layout, const NetworkConfig& cfg, int k) {
    validate(cfg);
    if (layout.saps.size() != layout.sues.size() || layout.saps.empty())
        throw invalid_config_error("layout needs one SUE per SAP, in order");
    if (k < 1 || static_cast<std::size_t>(k) > layout.saps.size())
        throw std::out_of_range("pair index k must satisfy 1 <= k <= K");

    const std::size_t kk = static_cast<std::size_t>(k) - 1;
    const Position origin{0.0, 0.0};
    const double n0 = noise_mw(cfg);
    PairBudget pb{};

    if (layout.direction == Direction::downlink) {
        const double pm = dbm_to_mw(cfg.mbs_power_dbm);
        const double ps = dbm_to_mw(cfg.sap_power_dbm);
        double den_m = n0, den_s = n0;
        for (std::size_t j = 0; j < layout.saps.size(); ++j) {
            if (j == kk) continue;
            den_m += channel_gain(LinkKind::sap_to_ue, distance(layout.mue, layout.saps[j])) * ps;
            den_s +=
                channel_gain(LinkKind::sap_to_ue, distance(layout.sues[kk], layout.saps[j])) * ps;
        }
        pb.snr_m = channel_gain(LinkKind::mbs_to_ue, distance(layout.mue, origin)) * pm / den_m;
        pb.inr_m =
            channel_gain(LinkKind::sap_to_ue, distance(layout.mue, layout.saps[kk])) * ps / den_m;
        pb.snr_s = channel_gain(LinkKind::sap_to_ue, distance(layout.sues[kk], layout.saps[kk])) *
                   ps / den_s;
        pb.inr_s =
            channel_gain(LinkKind::mbs_to_ue, distance(layout.sues[kk], origin)) * pm / den_s;
        return pb;
    }

    const double pu = dbm_to_mw(cfg.ue_power_dbm);
    double den_m = n0, den_s = n0;  // at the MBS and at SAP k
    for (std::size_t j = 0; j < layout.sues.size(); ++j) {
        if (j == kk) continue;
        den_m += channel_gain(LinkKind::mbs_to_ue, distance(layout.sues[j], origin)) * pu;
        den_s += channel_gain(LinkKind::sap_to_ue, distance(layout.sues[j], layout.saps[kk])) * pu;
    }
    pb.snr_m = channel_gain(LinkKind::mbs_to_ue, distance(layout.mue, origin)) * pu / den_m;
    pb.inr_m = channel_gain(LinkKind::mbs_to_ue, distance(layout.sues[kk], origin)) * pu / den_m;
    pb.snr_s =
        channel_gain(LinkKind::sap_to_ue, distance(layout.sues[kk], layout.saps[kk])) * pu / den_s;
    pb.inr_s = channel_gain(LinkKind::sap_to_ue, distance(layout.mue, layout.saps[kk])) * pu / den_s;
    return pb;
}

PairRates pair_rates(const NetworkLayout& layout, const NetworkConfig& cfg, int k) {
    const PairBudget pb = pair_budget(layout, cfg, k);
    const InterferenceMode mode =
        classify_mode(LinkBudget{pb.snr_m, pb.snr_s, pb.inr_m, pb.inr_s});
    PairRates pr{mode, 0.0, 0.0};
    switch (mode) {
        case InterferenceMode::very_strong:
            pr.r_m = log2_1p(pb.snr_m);
            pr.r_s = log2_1p(pb.snr_s);
            break;
        case InterferenceMode::strong: {
            pr.r_m = std::min(log2_1p(pb.snr_m), log2_1p(pb.inr_s));
            const double sum = std::min(log2_1p(pb.snr_m + pb.inr_m),
                                        log2_1p(pb.snr_s + pb.inr_s));
            const double cap = std::min(log2_1p(pb.snr_s), log2_1p(pb.inr_m));
            pr.r_s = std::clamp(sum - pr.r_m, 0.0, cap);
            break;
        }
        case InterferenceMode::mixed1:
            pr.r_m = log2_1p(pb.snr_m);
            pr.r_s = std::min(log2_1p(pb.snr_s / (1.0 + pb.inr_s)),
                              log2_1p(pb.inr_m / (1.0 + pb.snr_m)));
            break;
        case InterferenceMode::mixed2:
            pr.r_s = log2_1p(pb.snr_s);
            pr.r_m = std::min(log2_1p(pb.snr_m / (1.0 + pb.inr_m)),
                              log2_1p(pb.inr_s / (1.0 + pb.snr_s)));
            break;
        case InterferenceMode::weak:
        case InterferenceMode::very_weak:
            pr.r_m = log2_1p(pb.snr_m / (1.0 + pb.inr_m));
            pr.r_s = log2_1p(pb.snr_s / (1.0 + pb.inr_s));
            break;
    }
    return pr;
}

NetworkThroughput network_throughput(const NetworkLayout& layout, const NetworkConfig& cfg) {
    if (layout.saps.empty() || layout.saps.size() != layout.sues.size())
        throw invalid_config_error("layout needs at least one SAP/SUE pair");
    NetworkThroughput nt{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int k = 1; static_cast<std::size_t>(k) <= layout.saps.size(); ++k) {
        const PairRates pr = pair_rates(layout, cfg, k);
        nt.r_m = std::min(nt.r_m, pr.r_m);
        nt.r_s_sum += pr.r_s;
    }
    nt.total = nt.r_m + nt.r_s_sum;
    return nt;
}

std::vector<Position> place_saps_grid(const NetworkConfig& cfg, int k, std::uint64_t seed) {
    validate(cfg);
    if (k < 0) throw invalid_config_error("small-cell count must be non-negative");

    std::vector<Position> cand;
    const int imax = static_cast<int>(std::floor(cfg.cell_radius_m / cfg.grid_spacing_m));
    for (int i = -imax; i <= imax; ++i) {
        for (int j = -imax; j <= imax; ++j) {
            const Position p{cfg.grid_spacing_m * i, cfg.grid_spacing_m * j};
            const double d = std::hypot(p.x_m, p.y_m);
            if (d >= cfg.min_mbs_distance_m && d <= cfg.cell_radius_m) cand.push_back(p);
        }
    }
    if (static_cast<std::size_t>(k) > cand.size())
        throw infeasible_error("requested " + std::to_string(k) + " small cells but only " +
                               std::to_string(cand.size()) + " grid sites exist");

    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < static_cast<std::size_t>(k); ++t) {
        const std::size_t pick = t + rng.below(cand.size() - t);
        std::swap(cand[t], cand[pick]);
    }
    cand.resize(static_cast<std::size_t>(k));
    return cand;
}

Position place_sue(Position sap, const NetworkConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    SplitMix64 rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double r = cfg.small_cell_radius_m * std::sqrt(rng.uniform01());
        const double th = 2.0 * kPi * rng.uniform01();
        const Position p{sap.x_m + r * std::cos(th), sap.y_m + r * std::sin(th)};
        const double d_mbs = std::hypot(p.x_m, p.y_m);
        if (r >= 1.0 && d_mbs >= cfg.min_mbs_distance_m && d_mbs <= cfg.cell_radius_m) return p;
    }
    throw infeasible_error("no admissible user position around SAP after 10000 draws");
}

NetworkLayout parse_layout(std::istream& in, const NetworkConfig& cfg) {
    NetworkLayout layout;
    bool have_mue = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string type;
        if (!(ls >> type)) continue;
        double x = 0.0, y = 0.0;
        if (!(ls >> x >> y)) layout_error(lineno, "expected 'node_type x_m y_m'");
        std::string extra;
        if (ls >> extra) layout_error(lineno, "trailing tokens after coordinates");
        if (type == "MUE") {
            if (have_mue) layout_error(lineno, "more than one MUE");
            layout.mue = {x, y};
            have_mue = true;
        } else if (type == "SAP") {
            layout.saps.push_back({x, y});
        } else if (type == "SUE") {
            layout.sues.push_back({x, y});
        } else {
            layout_error(lineno, "unknown node type '" + type + "'");
        }
    }
    if (!have_mue) throw invalid_config_error("layout needs exactly one MUE");
    validate(layout, cfg);
    return layout;
}

NetworkLayout load_layout(const std::string& path, const NetworkConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw invalid_config_error("cannot open layout file: " + path);
    return parse_layout(in, cfg);
}

}  // namespace hknet

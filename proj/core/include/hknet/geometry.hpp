// Heterogeneous-network geometry: a macro base station at the origin, one
// macro user, and K small-cell access points each serving one user. Builds
// per-pair two-user link budgets for both directions, noise calibration from
// the cell-edge SNR target, and deterministic random placements.
#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hknet/channel.hpp"
#include "hknet/errors.hpp"

namespace hknet {

struct Position {
    double x_m, y_m;
};

inline double distance(Position a, Position b) {
    return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

struct NetworkConfig {
    double mbs_power_dbm = 46.0;
    double sap_power_dbm = 30.0;
    double ue_power_dbm = 23.0;
    double cell_radius_m = 500.0;
    double edge_snr_db = 5.0;          // target macro SNR at the cell edge
    double small_cell_radius_m = 60.0;
    double min_mbs_distance_m = 35.0;  // exclusion radius around the macro BS
    double grid_spacing_m = 120.0;     // SAP candidate lattice pitch
};

enum class Direction { downlink, uplink };

struct NetworkLayout {
    Position mue{0.0, 0.0};
    std::vector<Position> saps;
    std::vector<Position> sues;  // sues[k] is served by saps[k]
    Direction direction = Direction::downlink;
};

enum class LinkKind { mbs_to_ue, sap_to_ue };

// Distance-dependent path loss in dB; reciprocal, so the same value serves
// uplink. Throws std::invalid_argument for non-positive distances.
double path_loss_db(LinkKind kind, double distance_m);

// Linear power gain 10^(-path_loss_db/10).
double channel_gain(LinkKind kind, double distance_m);

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Noise power in dBm chosen so a macro downlink user at the cell edge sees
// exactly the configured edge SNR.
double calibrate_noise(const NetworkConfig& cfg);

inline double noise_mw(const NetworkConfig& cfg) { return dbm_to_mw(calibrate_noise(cfg)); }

void validate(const NetworkConfig& cfg);
void validate(const NetworkLayout& layout, const NetworkConfig& cfg);

// Gains and powers for one macro/small pair in isolation from the rest of
// the network (used by the synthetic probes: rate, mode map, sweep).
// User 1 is the macro link, user 2 the small-cell link. Distances are
// floored at 1 mm so probe positions that land exactly on a node stay total.
struct TwoUserChannel {
    ChannelGains gains;
    PowerBudget budget;
};

TwoUserChannel two_user_channel(Position mue, Position sap, Position sue,
                                const NetworkConfig& cfg, Direction dir);

// Link budget of pair k (1-based, 1 <= k <= K) inside the full network: the
// other K-1 small cells contribute Gaussian interference to both receivers
// and are absorbed into the effective noise floor.
struct PairBudget {
    double snr_m, snr_s;  // macro / small-cell direct links
    double inr_m, inr_s;  // cross interference at the macro / small receiver
};

PairBudget pair_budget(const NetworkLayout& layout, const NetworkConfig& cfg, int k);

// Per-pair rates under the mode-dependent coordination scheme; user order is
// (macro, small) as in pair_budget.
struct PairRates {
    InterferenceMode mode;
    double r_m, r_s;
};

PairRates pair_rates(const NetworkLayout& layout, const NetworkConfig& cfg, int k);

// The macro user must be decodable against every pair's scheme, so its rate
// is the minimum over pairs; small-cell rates add up.
struct NetworkThroughput {
    double r_m, r_s_sum, total;
};

NetworkThroughput network_throughput(const NetworkLayout& layout, const NetworkConfig& cfg);

// K SAP sites drawn without replacement from the lattice points of pitch
// grid_spacing_m that fall inside the allowed annulus. Deterministic in seed.
std::vector<Position> place_saps_grid(const NetworkConfig& cfg, int k, std::uint64_t seed);

// One small-cell user uniform on the SAP's disk, resampled until it is at
// least 1 m from the SAP and inside the allowed annulus (bounded attempts).
Position place_sue(Position sap, const NetworkConfig& cfg, std::uint64_t seed);

// Plain-text layout: one "node_type x_m y_m" per line (MUE, SAP, SUE), blank
// lines and '#' comments ignored; exactly one MUE, SAPs and SUEs paired in
// order of appearance. Direction is not part of the file.
NetworkLayout parse_layout(std::istream& in, const NetworkConfig& cfg);
NetworkLayout load_layout(const std::string& path, const NetworkConfig& cfg);

}  // namespace hknet

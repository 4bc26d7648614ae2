// Two-user Gaussian interference channel: link budgets, interference-mode
// classification (Table-I style SNR/INR conditions), and the Han-Kobayashi
// achievable sum-rate of an arbitrary private/common power split.
//
// Conventions: gains and powers are linear (powers in mW), rates are
// bits/symbol, dB/dBm conversions happen only at I/O boundaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

namespace hknet {

// log2(1 + x) without forming 1 + x first; everything rate-shaped uses it.
inline double log2_1p(double x) {
    return std::log1p(x) * 1.4426950408889634074;  // 1/ln(2)
}

struct ChannelGains {
    // gij is the power gain from transmitter j to receiver i.
    double g11, g12, g21, g22;
};

struct PowerBudget {
    double p1, p2;  // per-transmitter power budgets
    double n0;      // receiver noise power
};

struct LinkBudget {
    double snr1, snr2, inr1, inr2;
};

struct PowerSplit {
    // Private-layer powers; the common layers get p1 - p1p and p2 - p2p.
    double p1p, p2p;
};

struct PrivateRates {
    double r1p, r2p;
};

struct CommonRateBounds {
    // MAC bounds on the common messages: a1/a2/s1 at receiver 1 (user 1
    // individual, user 2 individual, sum), b1/b2/s2 likewise at receiver 2.
    double a1, a2, s1, b1, b2, s2;
};

enum class InterferenceMode { very_strong, strong, mixed1, mixed2, weak, very_weak };

std::string_view to_string(InterferenceMode m);
std::optional<InterferenceMode> mode_from_string(std::string_view name);

// snr1 = g11*p1/n0, snr2 = g22*p2/n0, inr1 = g12*p2/n0, inr2 = g21*p1/n0.
LinkBudget link_budget(const ChannelGains& g, const PowerBudget& b);

// First match in regime order: very strong, strong, mixed 1, mixed 2, then
// the weak quadrant where gamma < 1 separates very weak from weak. A zero
// gamma denominator (inr1 == snr2 or inr2 == snr1) classifies as weak.
InterferenceMode classify_mode(const LinkBudget& lb);

PrivateRates private_rates(const ChannelGains& g, const PowerBudget& b, const PowerSplit& s);
CommonRateBounds common_rate_bounds(const ChannelGains& g, const PowerBudget& b, const PowerSplit& s);

// Maximum of r1c + r2c over the intersection of the two MAC regions:
// min(s1, s2, a1 + b2, b1 + a2).
double max_common_sum(const CommonRateBounds& cb);

// private_rates sum + max_common_sum: the single achievability objective
// shared by the optimizer, the grid oracle and the baselines.
double split_sum_rate(const ChannelGains& g, const PowerBudget& b, const PowerSplit& s);

namespace detail {

// Same objective with the log calls fused into two (the min taken in the
// linear domain). The grid oracle and the weak-mode scans evaluate this
// hundreds of millions of times; the public composition stays the reference.
inline double split_sum_rate_fast(const ChannelGains& g, const PowerBudget& b,
                                  double p1p, double p2p) {
    const double p1c = b.p1 - p1p, p2c = b.p2 - p2p;
    const double d1 = g.g11 * p1p + g.g12 * p2p + b.n0;
    const double d2 = g.g21 * p1p + g.g22 * p2p + b.n0;
    const double priv = (1.0 + g.g11 * p1p / (g.g12 * p2p + b.n0)) *
                        (1.0 + g.g22 * p2p / (g.g21 * p1p + b.n0));
    const double s1 = 1.0 + (g.g11 * p1c + g.g12 * p2c) / d1;
    const double s2 = 1.0 + (g.g21 * p1c + g.g22 * p2c) / d2;
    const double ab = (1.0 + g.g11 * p1c / d1) * (1.0 + g.g22 * p2c / d2);
    const double ba = (1.0 + g.g12 * p2c / d1) * (1.0 + g.g21 * p1c / d2);
    return std::log2(priv) + std::log2(std::min(std::min(s1, s2), std::min(ab, ba)));
}

}  // namespace detail

}  // namespace hknet

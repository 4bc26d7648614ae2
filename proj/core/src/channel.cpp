#include "hknet/channel.hpp"

#include <stdexcept>

namespace hknet {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_gains(const ChannelGains& g) {
    require(std::isfinite(g.g11) && std::isfinite(g.g12) && std::isfinite(g.g21) &&
                std::isfinite(g.g22),
            "channel gains must be finite");
    require(g.g11 > 0 && g.g12 > 0 && g.g21 > 0 && g.g22 > 0,
            "channel gains must be positive");
}

void check_budget(const PowerBudget& b) {
    require(std::isfinite(b.p1) && std::isfinite(b.p2) && std::isfinite(b.n0),
            "power budget must be finite");
    require(b.p1 > 0 && b.p2 > 0, "transmit powers must be positive");
    require(b.n0 > 0, "noise power must be positive");
}

void check_split(const PowerBudget& b, const PowerSplit& s) {
    require(std::isfinite(s.p1p) && std::isfinite(s.p2p), "power split must be finite");
    require(s.p1p >= 0 && s.p1p <= b.p1, "p1p must lie in [0, p1]");
    require(s.p2p >= 0 && s.p2p <= b.p2, "p2p must lie in [0, p2]");
}

}  // namespace

std::string_view to_string(InterferenceMode m) {
    switch (m) {
        case InterferenceMode::very_strong: return "verystrong";
        case InterferenceMode::strong: return "strong";
        case InterferenceMode::mixed1: return "mixed1";
        case InterferenceMode::mixed2: return "mixed2";
        case InterferenceMode::weak: return "weak";
        case InterferenceMode::very_weak: return "veryweak";
    }
    return "?";
}

std::optional<InterferenceMode> mode_from_string(std::string_view name) {
    if (name == "verystrong") return InterferenceMode::very_strong;
    if (name == "strong") return InterferenceMode::strong;
    if (name == "mixed1") return InterferenceMode::mixed1;
    if (name == "mixed2") return InterferenceMode::mixed2;
    if (name == "weak") return InterferenceMode::weak;
    if (name == "veryweak") return InterferenceMode::very_weak;
    return std::nullopt;
}

LinkBudget link_budget(const ChannelGains& g, const PowerBudget& b) {
    check_gains(g);
    check_budget(b);
    return {g.g11 * b.p1 / b.n0, g.g22 * b.p2 / b.n0,
            g.g12 * b.p2 / b.n0, g.g21 * b.p1 / b.n0};
}

InterferenceMode classify_mode(const LinkBudget& lb) {
    const double s1 = lb.snr1, s2 = lb.snr2, i1 = lb.inr1, i2 = lb.inr2;
    if (s1 < i2 / (1.0 + s2) && s2 < i1 / (1.0 + s1)) return InterferenceMode::very_strong;
    if (s1 < i2 && s2 < i1) return InterferenceMode::strong;
    if (s1 >= i2 && s2 < i1) return InterferenceMode::mixed1;
    if (s1 < i2 && s2 >= i1) return InterferenceMode::mixed2;
    const double den = (i1 - s2) * (i2 - s1);
    if (den == 0.0) return InterferenceMode::weak;
    const double gamma = i1 * i2 * (s1 * s2 - i1 * i2 + s1 - i2 + s2 - i1) / den;
    return gamma < 1.0 ? InterferenceMode::very_weak : InterferenceMode::weak;
}

PrivateRates private_rates(const ChannelGains& g, const PowerBudget& b, const PowerSplit& s) {
    check_gains(g);
    check_budget(b);
    check_split(b, s);
    return {log2_1p(g.g11 * s.p1p / (g.g12 * s.p2p + b.n0)),
            log2_1p(g.g22 * s.p2p / (g.g21 * s.p1p + b.n0))};
}

CommonRateBounds common_rate_bounds(const ChannelGains& g, const PowerBudget& b,
                                    const PowerSplit& s) {
    check_gains(g);
    check_budget(b);
    check_split(b, s);
    const double p1c = b.p1 - s.p1p, p2c = b.p2 - s.p2p;
    const double d1 = g.g11 * s.p1p + g.g12 * s.p2p + b.n0;
    const double d2 = g.g21 * s.p1p + g.g22 * s.p2p + b.n0;
    return {log2_1p(g.g11 * p1c / d1),
            log2_1p(g.g12 * p2c / d1),
            log2_1p((g.g11 * p1c + g.g12 * p2c) / d1),
            log2_1p(g.g21 * p1c / d2),
            log2_1p(g.g22 * p2c / d2),
            log2_1p((g.g21 * p1c + g.g22 * p2c) / d2)};
}

double max_common_sum(const CommonRateBounds& cb) {
    return std::min({cb.s1, cb.s2, cb.a1 + cb.b2, cb.b1 + cb.a2});
}

double split_sum_rate(const ChannelGains& g, const PowerBudget& b, const PowerSplit& s) {
    const PrivateRates pr = private_rates(g, b, s);
    return pr.r1p + pr.r2p + max_common_sum(common_rate_bounds(g, b, s));
}

}  // namespace hknet

// Shared instance samplers for the unit tests. Channel draws follow the
// acceptance setup: SNRs/INRs log-uniform across [-20, 40] dB, realized as
// gains with unit powers and unit noise so the ratios are the gains.
#pragma once

#include <cmath>
#include <utility>

#include "hknet/channel.hpp"
#include "hknet/rng.hpp"

namespace testutil {

inline constexpr hknet::PowerBudget kUnit{1.0, 1.0, 1.0};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline hknet::LinkBudget sample_link_budget(hknet::SplitMix64& rng) {
    auto draw = [&] { return db_to_linear(-20.0 + 60.0 * rng.uniform01()); };
    return {draw(), draw(), draw(), draw()};
}

inline hknet::ChannelGains as_gains(const hknet::LinkBudget& lb) {
    return {lb.snr1, lb.inr1, lb.inr2, lb.snr2};
}

inline hknet::ChannelGains sample_mode_gains(hknet::SplitMix64& rng, hknet::InterferenceMode want) {
    for (;;) {
        const hknet::LinkBudget lb = sample_link_budget(rng);
        if (hknet::classify_mode(lb) == want) return as_gains(lb);
    }
}

// Unconstrained gains and budgets, for code paths that must not assume unit
// powers.
struct Instance {
    hknet::ChannelGains g;
    hknet::PowerBudget b;
};

inline Instance sample_general(hknet::SplitMix64& rng) {
    auto lu = [&](double lo, double hi) { return lo * std::pow(hi / lo, rng.uniform01()); };
    return {{lu(1e-3, 1e3), lu(1e-3, 1e3), lu(1e-3, 1e3), lu(1e-3, 1e3)},
            {lu(0.1, 10.0), lu(0.1, 10.0), lu(1e-3, 1.0)}};
}

inline hknet::PowerSplit sample_split(hknet::SplitMix64& rng, const hknet::PowerBudget& b) {
    return {b.p1 * rng.uniform01(), b.p2 * rng.uniform01()};
}

}  // namespace testutil

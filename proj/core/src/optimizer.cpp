#include "hknet/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hknet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Deterministic 1-D maximizer: coarse linear grid plus geometric tails from
// both endpoints (the objective can peak within ~n0/g of an edge, far below
// any uniform spacing), then golden-section polish around the best bracket.
template <typename F>
std::pair<double, double> scan_max(F&& f, double hi) {
    if (!(hi > 0.0)) return {0.0, f(0.0)};

    std::vector<double> xs;
    const int n_lin = 513, n_log = 128;
    xs.reserve(n_lin + 2 * n_log);
    for (int i = 0; i < n_lin; ++i) xs.push_back(hi * (double(i) / (n_lin - 1)));
    const double tail = hi * 1e-12;
    const double ratio = std::pow(hi / tail, 1.0 / (n_log - 1));
    double v = tail;
    for (int i = 0; i < n_log; ++i, v *= ratio) {
        xs.push_back(std::min(v, hi));
        xs.push_back(std::max(hi - v, 0.0));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::size_t bi = 0;
    double bv = kNegInf;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double fv = f(xs[i]);
        if (fv > bv) {
            bv = fv;
            bi = i;
        }
    }

    double a = xs[bi > 0 ? bi - 1 : 0];
    double b = xs[bi + 1 < xs.size() ? bi + 1 : xs.size() - 1];
    const double invphi = 0.61803398874989484820;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b), fm = f(xm);
    return fm > bv ? std::pair{xm, fm} : std::pair{xs[bi], bv};
}

double clamp01(double x, double hi) { return x < 0.0 ? 0.0 : (x > hi ? hi : x); }

}  // namespace

WeakModeCoefficients weak_mode_coefficients(const ChannelGains& g, const PowerBudget& b) {
    link_budget(g, b);  // input validation only
    WeakModeCoefficients co;
    const double det = g.g11 * g.g22 - g.g12 * g.g21;
    const double den = det * b.p1 + (g.g22 - g.g12) * b.n0;
    if (den == 0.0) {
        co.degenerate = true;
        return co;
    }
    co.alpha = (det * b.p2 + (g.g11 - g.g21) * b.n0) / den;
    co.beta = ((g.g22 - g.g12) * b.p2 + (g.g21 - g.g11) * b.p1) * b.n0 / den;
    if (!std::isfinite(co.alpha) || !std::isfinite(co.beta)) {
        co = {};
        co.degenerate = true;
        return co;
    }
    if (det != 0.0 && co.alpha > 0.0) {
        const double arg = (g.g11 * g.g22 / (g.g21 * g.g12)) *
                           ((g.g12 - g.g22) * (g.g21 - g.g11)) / co.alpha;
        if (arg >= 0.0) {
            co.rho = b.n0 * (std::sqrt(arg) - (g.g22 - g.g12)) / det;
            co.rho_valid = std::isfinite(co.rho);
        }
    }
    return co;
}

PowerSplit weak_mode_split(const ChannelGains& g, const PowerBudget& b) {
    const WeakModeCoefficients co = weak_mode_coefficients(g, b);

    PowerSplit best{0.0, 0.0};
    double best_v = kNegInf;
    auto consider = [&](double x, double y) {
        if (!std::isfinite(x) || !std::isfinite(y)) return;
        x = clamp01(x, b.p1);
        y = clamp01(y, b.p2);
        const double v = detail::split_sum_rate_fast(g, b, x, y);
        if (v > best_v ||
            (v == best_v && (x < best.p1p || (x == best.p1p && y < best.p2p)))) {
            best_v = v;
            best = {x, y};
        }
    };

    if (!co.degenerate) {
        auto line_y = [&](double x) { return clamp01(co.alpha * x + co.beta, b.p2); };
        consider(0.0, line_y(0.0));
        consider(b.p1, line_y(b.p1));
        if (co.alpha != 0.0) consider(-co.beta / co.alpha, line_y(-co.beta / co.alpha));
        if (co.rho_valid) consider(co.rho, line_y(co.rho));
        const auto [lx, lv] =
            scan_max([&](double x) { return detail::split_sum_rate_fast(g, b, x, line_y(x)); },
                     b.p1);
        (void)lv;
        consider(lx, line_y(lx));
    }

    consider(0.0, 0.0);
    consider(b.p1, 0.0);
    consider(0.0, b.p2);
    consider(b.p1, b.p2);

    // On the p2p = p2 edge only user 1 carries a common layer and the two MAC
    // bounds on it are monotone in opposite directions, so the edge optimum is
    // a corner or their crossing; likewise on p1p = p1 for user 2.
    const double k1 = g.g11 * b.p1 + g.g12 * b.p2 + b.n0;
    const double k2 = g.g21 * b.p1 + g.g22 * b.p2 + b.n0;
    {
        const double c1 = g.g12 * b.p2 + b.n0, c2 = g.g22 * b.p2 + b.n0;
        const double den = k1 * g.g21 - k2 * g.g11;
        if (den != 0.0) consider((k2 * c1 - k1 * c2) / den, b.p2);
    }
    {
        const double ca = g.g11 * b.p1 + b.n0, cb = g.g21 * b.p1 + b.n0;
        const double den = k1 * g.g22 - k2 * g.g12;
        if (den != 0.0) consider(b.p1, (k2 * ca - k1 * cb) / den);
    }

    {
        const auto [x, v] =
            scan_max([&](double t) { return detail::split_sum_rate_fast(g, b, t, b.p2); }, b.p1);
        (void)v;
        consider(x, b.p2);
    }
    {
        const auto [x, v] =
            scan_max([&](double t) { return detail::split_sum_rate_fast(g, b, t, 0.0); }, b.p1);
        (void)v;
        consider(x, 0.0);
    }
    {
        const auto [y, v] =
            scan_max([&](double t) { return detail::split_sum_rate_fast(g, b, b.p1, t); }, b.p2);
        (void)v;
        consider(b.p1, y);
    }
    {
        const auto [y, v] =
            scan_max([&](double t) { return detail::split_sum_rate_fast(g, b, 0.0, t); }, b.p2);
        (void)v;
        consider(0.0, y);
    }

    return best;
}

AllocationResult optimize(const ChannelGains& g, const PowerBudget& b) {
    const LinkBudget lb = link_budget(g, b);
    const InterferenceMode m = classify_mode(lb);
    PowerSplit s{0.0, 0.0};
    switch (m) {
        case InterferenceMode::very_strong:
        case InterferenceMode::strong: s = {0.0, 0.0}; break;
        case InterferenceMode::mixed1: s = {b.p1, 0.0}; break;
        case InterferenceMode::mixed2: s = {0.0, b.p2}; break;
        case InterferenceMode::very_weak: s = {b.p1, b.p2}; break;
        case InterferenceMode::weak: s = weak_mode_split(g, b); break;
    }
    return {m, s, split_sum_rate(g, b, s)};
}

AllocationResult brute_force_split(const ChannelGains& g, const PowerBudget& b, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
    const LinkBudget lb = link_budget(g, b);

    double best_v = kNegInf;
    double best_x = 0.0, best_y = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        const double x = b.p1 * (double(i) / (grid_n - 1));
        for (int j = 0; j < grid_n; ++j) {
            const double y = b.p2 * (double(j) / (grid_n - 1));
            const double v = detail::split_sum_rate_fast(g, b, x, y);
            if (v > best_v) {  // strict: ties keep the smallest p1p, then p2p
                best_v = v;
                best_x = x;
                best_y = y;
            }
        }
    }
    const PowerSplit s{best_x, best_y};
    return {classify_mode(lb), s, split_sum_rate(g, b, s)};
}

PowerSplit etw_split(const ChannelGains& g, const PowerBudget& b) {
    link_budget(g, b);  // input validation only
    return {std::min(b.p1, b.n0 / g.g21), std::min(b.p2, b.n0 / g.g12)};
}

BaselineRates baseline_rates(const ChannelGains& g, const PowerBudget& b) {
    const LinkBudget lb = link_budget(g, b);
    return {log2_1p(lb.snr1 / (1.0 + lb.inr1)) + log2_1p(lb.snr2 / (1.0 + lb.inr2)),
            0.5 * log2_1p(lb.snr1) + 0.5 * log2_1p(lb.snr2)};
}

}  // namespace hknet

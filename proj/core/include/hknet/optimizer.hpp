// Sum-rate-optimal private/common power splits per interference mode, the
// exhaustive grid oracle, and the reference baselines (half-interference
// split, treat-interference-as-noise, orthogonal sharing).
#pragma once

#include "hknet/channel.hpp"

namespace hknet {

struct AllocationResult {
    InterferenceMode mode;
    PowerSplit split;
    double sum_rate;  // split_sum_rate evaluated at split
};

struct WeakModeCoefficients {
    // The weak-mode search line p2p = alpha * p1p + beta and the stationary
    // candidate rho on it. degenerate marks a vanishing alpha/beta
    // denominator; rho_valid marks a usable (finite, real) rho.
    double alpha = 0.0;
    double beta = 0.0;
    double rho = 0.0;
    bool degenerate = false;
    bool rho_valid = false;
};

WeakModeCoefficients weak_mode_coefficients(const ChannelGains& g, const PowerBudget& b);

// Best split found for a weak-mode channel: the line candidates
// {0, -beta/alpha, rho, p1} plus deterministic refinement along the line and
// the budget-box edges (the objective routinely peaks there, within ~n0/g of
// a corner, which no coarse candidate set resolves).
PowerSplit weak_mode_split(const ChannelGains& g, const PowerBudget& b);

// Mode-dependent closed-form split (full-common, full-private or one-sided
// corners; weak_mode_split in the weak regime), evaluated via split_sum_rate.
AllocationResult optimize(const ChannelGains& g, const PowerBudget& b);

// Exhaustive search over the uniform grid {i*p1/(n-1)} x {j*p2/(n-1)};
// ties resolve to the smallest p1p, then smallest p2p. Single-threaded.
AllocationResult brute_force_split(const ChannelGains& g, const PowerBudget& b,
                                   int grid_n = 512);

// Half-interference heuristic: private power capped so each private layer
// arrives at the other receiver at the noise floor.
PowerSplit etw_split(const ChannelGains& g, const PowerBudget& b);

struct BaselineRates {
    double tin;         // both users full power, interference as noise
    double orthogonal;  // equal time sharing, interference-free halves
};

BaselineRates baseline_rates(const ChannelGains& g, const PowerBudget& b);

}  // namespace hknet

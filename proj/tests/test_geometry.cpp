#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "doctest.h"
#include "hknet/geometry.hpp"
#include "hknet/rng.hpp"

using namespace hknet;

namespace {

const NetworkConfig kDefaults{};

// raw-formula twin of channel_gain, kept deliberately separate
double gain_mbs(double d) { return std::pow(10.0, -(15.3 + 37.6 * std::log10(d)) / 10.0); }
double gain_sap(double d) { return std::pow(10.0, -(30.6 + 36.7 * std::log10(d)) / 10.0); }

}  // namespace

TEST_CASE("splitmix64 streams are deterministic and well-ranged") {
    SplitMix64 a(42), b(42), c(43);
    bool all_equal = true;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t va = a.next();
        all_equal = all_equal && va == b.next();
        if (i == 0) CHECK(va != c.next());
    }
    CHECK(all_equal);

    SplitMix64 r(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    for (int i = 0; i < 100000; ++i) REQUIRE(r.below(7) < 7);

    CHECK(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4));
    CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 4, 3));
    CHECK(derive_seed(1, 2, 3, 4) != derive_seed(2, 2, 3, 4));
}

TEST_CASE("path loss at reference distances") {
    CHECK(path_loss_db(LinkKind::mbs_to_ue, 500.0) ==
          doctest::Approx(116.78127216303431).epsilon(1e-12));
    CHECK(path_loss_db(LinkKind::sap_to_ue, 60.0) ==
          doctest::Approx(95.85815088907872).epsilon(1e-12));
    CHECK(path_loss_db(LinkKind::mbs_to_ue, 1.0) == doctest::Approx(15.3).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_db(LinkKind::mbs_to_ue, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(path_loss_db(LinkKind::sap_to_ue, -3.0), std::invalid_argument);
}

TEST_CASE("noise calibration hits the cell-edge SNR target") {
    const double n_dbm = calibrate_noise(kDefaults);
    CHECK(n_dbm == doctest::Approx(-75.78127216303431).epsilon(1e-12));

    // a macro user at exactly the cell edge sees exactly the target SNR
    const double rx_dbm = kDefaults.mbs_power_dbm - path_loss_db(LinkKind::mbs_to_ue, 500.0);
    CHECK(rx_dbm - n_dbm == doctest::Approx(kDefaults.edge_snr_db).epsilon(1e-12));

    CHECK(mw_to_dbm(dbm_to_mw(n_dbm)) == doctest::Approx(n_dbm).epsilon(1e-12));
}

TEST_CASE("config validation") {
    NetworkConfig bad = kDefaults;
    bad.cell_radius_m = -1.0;
    CHECK_THROWS_AS(validate(bad), invalid_config_error);
    bad = kDefaults;
    bad.min_mbs_distance_m = 600.0;
    CHECK_THROWS_AS(validate(bad), invalid_config_error);
    bad = kDefaults;
    bad.grid_spacing_m = 0.0;
    CHECK_THROWS_AS(validate(bad), invalid_config_error);
    CHECK_NOTHROW(validate(kDefaults));
}

TEST_CASE("two_user_channel matches pair_budget for a single pair") {
    const NetworkLayout lo{{80, 0}, {{300, 300}}, {{340, 300}}, Direction::downlink};
    for (Direction dir : {Direction::downlink, Direction::uplink}) {
        NetworkLayout l = lo;
        l.direction = dir;
        const TwoUserChannel tu = two_user_channel(l.mue, l.saps[0], l.sues[0], kDefaults, dir);
        const LinkBudget lb = link_budget(tu.gains, tu.budget);
        const PairBudget pb = pair_budget(l, kDefaults, 1);
        CHECK(lb.snr1 == doctest::Approx(pb.snr_m).epsilon(1e-12));
        CHECK(lb.snr2 == doctest::Approx(pb.snr_s).epsilon(1e-12));
        CHECK(lb.inr1 == doctest::Approx(pb.inr_m).epsilon(1e-12));
        CHECK(lb.inr2 == doctest::Approx(pb.inr_s).epsilon(1e-12));
    }
}

TEST_CASE("uplink budgets put both users at UE power") {
    const TwoUserChannel tu =
        two_user_channel({80, 0}, {300, 300}, {340, 300}, kDefaults, Direction::uplink);
    CHECK(tu.budget.p1 == tu.budget.p2);
    CHECK(tu.budget.p1 == doctest::Approx(dbm_to_mw(kDefaults.ue_power_dbm)).epsilon(1e-15));
    // the MBS-side links keep the downlink gain (reciprocal path loss)
    const TwoUserChannel dl =
        two_user_channel({80, 0}, {300, 300}, {340, 300}, kDefaults, Direction::downlink);
    CHECK(tu.gains.g11 == dl.gains.g11);
}

TEST_CASE("pair_budget against a hand-built two-cell network") {
    // symmetric: the MUE sits on the bisector, the cells mirror each other
    const NetworkLayout lo{{0, 100}, {{240, 0}, {-240, 0}}, {{280, 0}, {-280, 0}},
                           Direction::downlink};
    const PairBudget pb1 = pair_budget(lo, kDefaults, 1);
    const PairBudget pb2 = pair_budget(lo, kDefaults, 2);
    CHECK(pb1.snr_m == doctest::Approx(pb2.snr_m).epsilon(1e-12));
    CHECK(pb1.snr_s == doctest::Approx(pb2.snr_s).epsilon(1e-12));
    CHECK(pb1.inr_m == doctest::Approx(pb2.inr_m).epsilon(1e-12));
    CHECK(pb1.inr_s == doctest::Approx(pb2.inr_s).epsilon(1e-12));

    // fully independent recomputation of pair 1, raw formulas only
    const double n0 = std::pow(10.0, (46.0 - (15.3 + 37.6 * std::log10(500.0)) - 5.0) / 10.0);
    const double pm = std::pow(10.0, 4.6), ps = std::pow(10.0, 3.0);
    const double d_mue_mbs = 100.0;
    const double d_mue_sap1 = std::hypot(240.0, 100.0);
    const double d_mue_sap2 = std::hypot(240.0, 100.0);
    const double d_sue1_sap1 = 40.0, d_sue1_sap2 = 520.0, d_sue1_mbs = 280.0;
    const double den_m = n0 + gain_sap(d_mue_sap2) * ps;
    const double den_s = n0 + gain_sap(d_sue1_sap2) * ps;
    CHECK(pb1.snr_m == doctest::Approx(gain_mbs(d_mue_mbs) * pm / den_m).epsilon(1e-12));
    CHECK(pb1.inr_m == doctest::Approx(gain_sap(d_mue_sap1) * ps / den_m).epsilon(1e-12));
    CHECK(pb1.snr_s == doctest::Approx(gain_sap(d_sue1_sap1) * ps / den_s).epsilon(1e-12));
    CHECK(pb1.inr_s == doctest::Approx(gain_mbs(d_sue1_mbs) * pm / den_s).epsilon(1e-12));

    // uplink twin, same geometry
    NetworkLayout up = lo;
    up.direction = Direction::uplink;
    const PairBudget ub = pair_budget(up, kDefaults, 1);
    const double pu = std::pow(10.0, 2.3);
    const double uden_m = n0 + gain_mbs(280.0) * pu;
    const double uden_s = n0 + gain_sap(520.0) * pu;
    CHECK(ub.snr_m == doctest::Approx(gain_mbs(100.0) * pu / uden_m).epsilon(1e-12));
    CHECK(ub.inr_m == doctest::Approx(gain_mbs(280.0) * pu / uden_m).epsilon(1e-12));
    CHECK(ub.snr_s == doctest::Approx(gain_sap(40.0) * pu / uden_s).epsilon(1e-12));
    CHECK(ub.inr_s == doctest::Approx(gain_sap(std::hypot(240.0, 100.0)) * pu / uden_s)
                          .epsilon(1e-12));
}

TEST_CASE("pair_budget index bounds") {
    const NetworkLayout lo{{80, 0}, {{300, 300}}, {{340, 300}}, Direction::downlink};
    CHECK_THROWS_AS(pair_budget(lo, kDefaults, 0), std::out_of_range);
    CHECK_THROWS_AS(pair_budget(lo, kDefaults, 2), std::out_of_range);
}

TEST_CASE("strong pairs stay inside the MAC intersection") {
    // MUE almost on top of the SAP, SUE halfway to the MBS: strong regime
    const NetworkLayout lo{{141, 1}, {{140, 0}}, {{90, 0}}, Direction::downlink};
    const PairBudget pb = pair_budget(lo, kDefaults, 1);
    const PairRates pr = pair_rates(lo, kDefaults, 1);
    REQUIRE(pr.mode == InterferenceMode::strong);

    const ChannelGains eq{pb.snr_m, pb.inr_m, pb.inr_s, pb.snr_s};
    const CommonRateBounds cb = common_rate_bounds(eq, {1, 1, 1}, {0.0, 0.0});
    CHECK(pr.r_m >= 0.0);
    CHECK(pr.r_s >= 0.0);
    CHECK(pr.r_m <= std::min(cb.a1, cb.b1) + 1e-12);
    CHECK(pr.r_s <= std::min(cb.a2, cb.b2) + 1e-12);
    CHECK(pr.r_m + pr.r_s <= std::min(cb.s1, cb.s2) + 1e-12);
}

TEST_CASE("pair_rates over random layouts") {
    int modes_seen = 0;
    std::set<InterferenceMode> seen;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int K = 1 + static_cast<int>(seed % 3);
        NetworkLayout lo;
        lo.mue = {2.0 * kDefaults.cell_radius_m / 3.0, 0.0};
        lo.saps = place_saps_grid(kDefaults, K, derive_seed(seed, 1));
        for (int k = 0; k < K; ++k)
            lo.sues.push_back(place_sue(lo.saps[k], kDefaults, derive_seed(seed, 2, k)));
        lo.direction = seed % 2 == 0 ? Direction::downlink : Direction::uplink;

        for (int k = 1; k <= K; ++k) {
            const PairBudget pb = pair_budget(lo, kDefaults, k);
            const PairRates pr = pair_rates(lo, kDefaults, k);
            seen.insert(pr.mode);
            CHECK(pr.r_m >= 0.0);
            CHECK(pr.r_s >= 0.0);
            CHECK(pr.r_m <= log2_1p(pb.snr_m) + 1e-12);
            CHECK(pr.r_s <= log2_1p(pb.snr_s) + 1e-12);

            if (pr.mode == InterferenceMode::mixed1) {
                // if the cross-decoding branch binds, the rates sum to the
                // joint bound at the macro receiver
                const double cross = log2_1p(pb.inr_m / (1.0 + pb.snr_m));
                if (pr.r_s == doctest::Approx(cross).epsilon(1e-12))
                    CHECK(pr.r_m + pr.r_s ==
                          doctest::Approx(log2_1p(pb.snr_m + pb.inr_m)).epsilon(1e-9));
            }
            if (pr.mode == InterferenceMode::weak || pr.mode == InterferenceMode::very_weak) {
                CHECK(pr.r_m == doctest::Approx(log2_1p(pb.snr_m / (1.0 + pb.inr_m)))
                                    .epsilon(1e-12));
                CHECK(pr.r_s == doctest::Approx(log2_1p(pb.snr_s / (1.0 + pb.inr_s)))
                                    .epsilon(1e-12));
            }
        }
    }
    modes_seen = static_cast<int>(seen.size());
    CHECK(modes_seen >= 2);
}

TEST_CASE("network_throughput aggregates pair rates") {
    NetworkLayout lo;
    lo.mue = {333.0, 0.0};
    lo.saps = place_saps_grid(kDefaults, 4, 99);
    for (int k = 0; k < 4; ++k)
        lo.sues.push_back(place_sue(lo.saps[k], kDefaults, derive_seed(99, 7, k)));

    const NetworkThroughput nt = network_throughput(lo, kDefaults);
    double min_m = std::numeric_limits<double>::infinity(), sum_s = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const PairRates pr = pair_rates(lo, kDefaults, k);
        min_m = std::min(min_m, pr.r_m);
        sum_s += pr.r_s;
    }
    CHECK(nt.r_m == min_m);
    CHECK(nt.r_s_sum == doctest::Approx(sum_s).epsilon(1e-15));
    CHECK(nt.total == doctest::Approx(min_m + sum_s).epsilon(1e-15));

    CHECK_THROWS_AS(network_throughput(NetworkLayout{}, kDefaults), invalid_config_error);
}

TEST_CASE("SAP lattice placement") {
    // the default lattice admits exactly 56 sites inside the annulus
    const std::vector<Position> all = place_saps_grid(kDefaults, 56, 1);
    CHECK(all.size() == 56);
    CHECK_THROWS_AS(place_saps_grid(kDefaults, 57, 1), infeasible_error);

    for (const Position& p : all) {
        const double d = std::hypot(p.x_m, p.y_m);
        CHECK(d >= kDefaults.min_mbs_distance_m);
        CHECK(d <= kDefaults.cell_radius_m);
        CHECK(std::fmod(p.x_m, kDefaults.grid_spacing_m) == 0.0);
        CHECK(std::fmod(p.y_m, kDefaults.grid_spacing_m) == 0.0);
    }
    std::set<std::pair<double, double>> uniq;
    for (const Position& p : all) uniq.insert({p.x_m, p.y_m});
    CHECK(uniq.size() == 56);

    const std::vector<Position> a = place_saps_grid(kDefaults, 5, 11);
    const std::vector<Position> b = place_saps_grid(kDefaults, 5, 11);
    const std::vector<Position> c = place_saps_grid(kDefaults, 5, 12);
    bool same_ab = true, same_ac = true;
    for (int i = 0; i < 5; ++i) {
        same_ab = same_ab && a[i].x_m == b[i].x_m && a[i].y_m == b[i].y_m;
        same_ac = same_ac && a[i].x_m == c[i].x_m && a[i].y_m == c[i].y_m;
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
}

TEST_CASE("SUE placement statistics") {
    const Position sap{240.0, 120.0};
    double mean_r = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Position p = place_sue(sap, kDefaults, derive_seed(5, 0, i));
        const double r = distance(p, sap);
        const double d = std::hypot(p.x_m, p.y_m);
        REQUIRE(r >= 1.0);
        REQUIRE(r <= kDefaults.small_cell_radius_m);
        REQUIRE(d >= kDefaults.min_mbs_distance_m);
        REQUIRE(d <= kDefaults.cell_radius_m);
        mean_r += r;
    }
    mean_r /= n;
    // uniform on a disk of radius 60 has mean radius 2R/3 = 40
    CHECK(mean_r == doctest::Approx(40.0).epsilon(0.025));

    const Position p1 = place_sue(sap, kDefaults, 77);
    const Position p2 = place_sue(sap, kDefaults, 77);
    CHECK(p1.x_m == p2.x_m);
    CHECK(p1.y_m == p2.y_m);
}

TEST_CASE("SUE placement gives up when no draw can qualify") {
    NetworkConfig tight = kDefaults;
    tight.small_cell_radius_m = 0.5;  // below the 1 m standoff
    CHECK_THROWS_AS(place_sue({240, 0}, tight, 3), infeasible_error);
}

TEST_CASE("layout parsing accepts comments and blank lines") {
    std::istringstream in(
        "# two cells\n"
        "MUE 80 0\n"
        "\n"
        "SAP 300 300   # north-east\n"
        "SUE 340 300\n"
        "SAP -240 0\n"
        "SUE -280 0\n");
    const NetworkLayout lo = parse_layout(in, kDefaults);
    CHECK(lo.mue.x_m == 80.0);
    CHECK(lo.saps.size() == 2);
    CHECK(lo.sues.size() == 2);
    CHECK(lo.sues[1].x_m == -280.0);
    CHECK(lo.direction == Direction::downlink);
}

TEST_CASE("layout parsing rejects malformed files") {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_layout(in, kDefaults);
    };
    CHECK_THROWS_AS(parse("SAP 300 300\nSUE 340 300\n"), invalid_config_error);  // no MUE
    CHECK_THROWS_AS(parse("MUE 80 0\nMUE 90 0\nSAP 300 300\nSUE 340 300\n"),
                    invalid_config_error);
    CHECK_THROWS_AS(parse("MUE 80 0\nSAP 300 300\n"), invalid_config_error);  // unpaired
    CHECK_THROWS_AS(parse("MUE 80 0\nSAP 300\nSUE 340 300\n"), invalid_config_error);
    CHECK_THROWS_AS(parse("MUE 80 0\nSAP 300 300 7\nSUE 340 300\n"), invalid_config_error);
    CHECK_THROWS_AS(parse("MUE 80 0\nTOWER 300 300\nSUE 340 300\n"), invalid_config_error);
    CHECK_THROWS_AS(parse("MUE 80 0\nSAP 300 300\nSUE 470 300\n"),
                    invalid_config_error);  // SUE outside its small cell
    CHECK_THROWS_AS(parse("MUE 10 0\nSAP 300 300\nSUE 340 300\n"),
                    invalid_config_error);  // MUE inside the exclusion radius
    CHECK_THROWS_AS(parse("MUE 80 0\nSAP 300 300\nSUE 300 300\n"),
                    invalid_config_error);  // coincident nodes
}

TEST_CASE("load_layout surfaces missing files") {
    CHECK_THROWS_AS(load_layout("/nonexistent/layout.txt", kDefaults), invalid_config_error);
}

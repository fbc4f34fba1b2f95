#include <catch2/catch.hpp>

#include <fspca/metrics.hpp>
#include <fspca/oracle.hpp>
#include <fspca/solver.hpp>
#include <fspca/synth.hpp>

#include "support/helpers.hpp"

using namespace fspca;

TEST_CASE("intersection_ratio") {
    const SupportIndices a({0, 1, 2, 3}, 10);
    const SupportIndices b({2, 3, 4, 5}, 10);
    REQUIRE(intersection_ratio(a, a) == 1.0);
    REQUIRE(intersection_ratio(a, b) == 0.5);
    REQUIRE(intersection_ratio(SupportIndices({0, 1}, 6), SupportIndices({2, 3}, 6)) == 0.0);
    REQUIRE_THROWS_AS(intersection_ratio(a, SupportIndices({0, 1}, 10)), input_error);
}

TEST_CASE("best_intersection_ratio uses oracle ties") {
    Eigen::VectorXd v(4);
    v << 5, 5, 1, 1;
    const OracleResult oracle = brute_force(SymMat::diagonal(v), 1, 1);
    REQUIRE(best_intersection_ratio(SupportIndices({0}, 4), oracle) == 1.0);
    REQUIRE(best_intersection_ratio(SupportIndices({1}, 4), oracle) == 1.0);
    REQUIRE(best_intersection_ratio(SupportIndices({2}, 4), oracle) == 0.0);
}

TEST_CASE("relative_error") {
    REQUIRE(relative_error(10.0, 10.0) == 0.0);
    REQUIRE(relative_error(9.0, 10.0) == Approx(0.1));
    // Tiny overshoot clamps to zero; real overshoot is an oracle violation.
    REQUIRE(relative_error(10.0 + 1e-12, 10.0) == 0.0);
    REQUIRE_THROWS_AS(relative_error(11.0, 10.0), solver_error);
    REQUIRE_THROWS_AS(relative_error(1.0, 0.0), input_error);
}

TEST_CASE("hit_frequency") {
    REQUIRE(hit_frequency({0.0, 0.0, 0.0}) == 1.0);
    REQUIRE(hit_frequency({0.0, 0.5}) == 0.5);
    REQUIRE_THROWS_AS(hit_frequency({}), input_error);

    // Monotone nonincreasing in the threshold; +inf accepts everything.
    const std::vector<double> res{0.0, 1e-4, 1e-2, 0.3};
    double prev = 1.0;
    for (double threshold : {std::numeric_limits<double>::infinity(), 0.5, 1e-3, 1e-5, 0.0}) {
        const double hf = hit_frequency(res, threshold);
        REQUIRE(hf <= prev + 1e-15);
        prev = hf;
    }
    REQUIRE(hit_frequency(res, std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("normalized explained variance") {
    Rng rng(41);
    const SymMat a = testsupport::random_psd(8, 8, rng);
    REQUIRE(normalized_explained_variance(a, go(a, 3, 8)) == Approx(1.0).margin(1e-10));

    // Support confined to the nullspace explains nothing.
    const SymMat confined = testsupport::embedded_psd(8, {0, 1, 2}, 3, rng);
    const SubspaceEstimate w = refine_eigenvectors(SymMat::identity(8), SupportIndices({5, 6, 7}, 8), 2);
    REQUIRE(normalized_explained_variance(confined, w) == Approx(0.0).margin(1e-12));

    const SubspaceEstimate small =
        refine_eigenvectors(SymMat::identity(4), SupportIndices({0, 1}, 4), 1);
    REQUIRE(normalized_explained_variance(SymMat::zero(4), small) == 1.0);
}

TEST_CASE("bound_constants on hand-checked spectra") {
    SECTION("rank <= m collapses the bound") {
        Rng rng(42);
        const SymMat a = testsupport::random_psd(8, 2, rng);
        const BoundConstants b = bound_constants(a, 2, 4);
        REQUIRE(b.g1 == Approx(0.0).margin(1e-9));
        REQUIRE(b.g2 == Approx(0.0).margin(1e-9));
        REQUIRE(b.epsilon_bound == Approx(0.0).margin(1e-9));

        // Rank-3 spectrum at m = 3: the gap constants vanish exactly.
        const BoundConstants c = bound_constants(make_covariance(scheme_preset('C', 12, 1)), 3, 5);
        REQUIRE(c.g1 == Approx(0.0).margin(1e-9));
        REQUIRE(c.g2 == Approx(0.0).margin(1e-9));
    }
    SECTION("diag(4,2,1,1), m=1, k=2") {
        Eigen::VectorXd v(4);
        v << 4, 2, 1, 1;
        const BoundConstants b = bound_constants(SymMat::diagonal(v), 1, 2);
        REQUIRE(b.r == 2);
        REQUIRE(b.g1 == Approx(0.5));
        REQUIRE(b.g2 == Approx(0.25));
        REQUIRE(b.epsilon_bound == Approx(1.0));
    }
    SECTION("zipf t=2 stays under the closed-form ceiling") {
        Eigen::VectorXd zipf(8);
        for (int i = 0; i < 8; ++i) zipf(i) = 1.0 / ((i + 1.0) * (i + 1.0));
        const BoundConstants b = bound_constants_from_spectrum(zipf, 2, 4);
        const double expected = (1.0 / 9.0 + 1.0 / 16.0) / (1.0 + 0.25);
        REQUIRE(b.g1 == Approx(expected));
        REQUIRE(b.g1 <= zipf_g1_bound(2, 2.0));
    }
}

TEST_CASE("zipf_g1_bound closed form") {
    REQUIRE(zipf_g1_bound(1, 2.0) == Approx(0.25));
    REQUIRE(zipf_g1_bound(4, 2.0) == Approx(0.25));
    REQUIRE(zipf_g1_bound(3, 3.0) == Approx(1.0 / 9.0));
    REQUIRE_THROWS_AS(zipf_g1_bound(0, 2.0), input_error);
    REQUIRE_THROWS_AS(zipf_g1_bound(2, 1.0), input_error);
}

TEST_CASE("exact zipf spectra respect the G1 ceiling for all (m, t)") {
    for (int m = 1; m <= 8; ++m) {
        for (double t : {1.5, 2.0, 3.0}) {
            const int d = 16;
            Eigen::VectorXd values(d);
            for (int i = 0; i < d; ++i) values(i) = std::pow(i + 1.0, -t);
            const BoundConstants b = bound_constants_from_spectrum(values, m, m);
            REQUIRE(b.g1 <= zipf_g1_bound(m, t) + 1e-12);
        }
    }
}

TEST_CASE("low-rank solver ratio never falls below 1 - epsilon") {
    Rng rng(43);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 7 + static_cast<int>(rng.uniform_index(4));
        const int m = 1 + static_cast<int>(rng.uniform_index(2));
        const int k = m + 1;
        const SymMat a = testsupport::random_psd(d, d, rng);
        const OracleResult oracle = brute_force(a, m, k);
        const double re =
            relative_error(objective_value(a, go_lowrank_init(a, m, k)), oracle.optimal_objective);
        REQUIRE(1.0 - re >= 1.0 - bound_constants(a, m, k).epsilon_bound - 1e-9);
    }
}

TEST_CASE("iterating can only raise the explained variance") {
    Rng rng(44);
    const SymMat a = testsupport::random_psd(12, 12, rng);
    SolverConfig cfg;
    cfg.m = 3;
    cfg.k = 6;
    const SubspaceEstimate init = go_lowrank_init(a, 3, 6);
    const SolveReport report = ipu(a, cfg, init);
    REQUIRE(normalized_explained_variance(a, report.estimate) >=
            normalized_explained_variance(a, init) - 1e-12);
}

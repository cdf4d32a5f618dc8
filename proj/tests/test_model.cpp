#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "chemostab/error.hpp"
#include "chemostab/model.hpp"

using namespace chemostab;

namespace {

ModelParams symmetric() {
    ModelParams p;
    p.a1 = p.a2 = 0.5;
    return p;
}

}  // namespace

TEST_CASE("steady state examples") {
    const SteadyState s = steady_state(symmetric());
    CHECK(s.u_star == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s.v_star == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s.w_star == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    ModelParams p;
    p.a1 = 0.25;
    p.a2 = 0.5;
    p.alpha = 2.0;
    p.beta = 1.0;
    p.gamma = 4.0;
    const SteadyState t = steady_state(p);
    CHECK(t.u_star == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
    CHECK(t.v_star == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
    CHECK(t.w_star == doctest::Approx(4.0 / 7.0).epsilon(1e-15));

    ModelParams weak;
    weak.a1 = weak.a2 = 1e-9;
    weak.alpha = 2.0;
    weak.beta = 3.0;
    weak.gamma = 5.0;
    const SteadyState w = steady_state(weak);
    CHECK(w.u_star == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(w.v_star == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(w.w_star == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("steady state rejects strong competition") {
    ModelParams p;
    p.a1 = 1.5;
    p.a2 = 0.5;
    CHECK_THROWS_AS(steady_state(p), DomainError);
    p.a1 = 1.0;
    p.a2 = 1.0;
    CHECK_THROWS_AS(steady_state(p), DomainError);
}

TEST_CASE("validate rejects nonpositive rates") {
    ModelParams p;
    p.d2 = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = ModelParams{};
    p.M1 = -1.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
}

TEST_CASE("property: steady state zeroes the kinetics and is invariant under signal rescaling") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.01, 0.99), pos(0.1, 10.0);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int trial = 0; trial < 1000; ++trial) {
        ModelParams p;
        p.a1 = unit(rng);
        p.a2 = unit(rng);
        p.mu1 = pos(rng);
        p.mu2 = pos(rng);
        p.alpha = pos(rng);
        p.beta = pos(rng);
        p.gamma = pos(rng);
        const SteadyState s = steady_state(p);
        REQUIRE(s.u_star > 0.0);
        REQUIRE(s.v_star > 0.0);
        REQUIRE(s.w_star > 0.0);
        CHECK(std::abs(p.mu1 * s.u_star * (1.0 - s.u_star - p.a1 * s.v_star)) <=
              4.0 * eps * p.mu1 * s.u_star);
        CHECK(std::abs(p.mu2 * s.v_star * (1.0 - p.a2 * s.u_star - s.v_star)) <=
              4.0 * eps * p.mu2 * s.v_star);
        CHECK(std::abs(p.alpha * s.u_star + p.beta * s.v_star - p.gamma * s.w_star) <=
              4.0 * eps * (p.alpha * s.u_star + p.beta * s.v_star));

        const double k = pos(rng);
        ModelParams scaled = p;
        scaled.alpha *= k;
        scaled.beta *= k;
        scaled.gamma *= k;
        const SteadyState t = steady_state(scaled);
        CHECK(t.u_star == s.u_star);
        CHECK(t.v_star == s.v_star);
        CHECK(t.w_star == doctest::Approx(s.w_star).epsilon(1e-14));
    }
}

TEST_CASE("sensitivity evaluation") {
    const auto c = SensitivitySpec::constant(0.3, 0.7);
    CHECK(c.chi(Species::u, 5.0) == 0.3);
    CHECK(c.chi(Species::v, 0.0) == 0.7);
    CHECK(c.dchi(Species::u, 2.0) == 0.0);

    const auto r = SensitivitySpec::reciprocal(2.0, 3.0);
    CHECK(r.chi(Species::u, 4.0) == 0.5);
    CHECK(r.dchi(Species::v, 2.0) == doctest::Approx(-0.75));
    CHECK_THROWS_AS(r.chi(Species::u, 0.0), DomainError);
    CHECK_THROWS_AS(r.chi(Species::u, -1.0), DomainError);

    const auto t = SensitivitySpec::tabulated({0.0, 1.0, 2.0}, {1.0, 0.5, 0.0}, {0.0, 0.0, 1.0});
    CHECK(t.chi(Species::u, 0.5) == doctest::Approx(0.75));
    CHECK(t.chi(Species::u, 10.0) == doctest::Approx(0.0));
    CHECK(t.chi(Species::v, 1.5) == doctest::Approx(0.5));
    CHECK(t.dchi(Species::u, 0.5) == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK_THROWS(SensitivitySpec::tabulated({0.0, 1.0}, {-1.0, 0.0}, {0.0, 0.0}));
}

TEST_CASE("sensitivity bounds are the grid maxima") {
    const auto grid = default_sample_grid();
    REQUIRE(grid.size() == 512);
    CHECK(grid.front() == doctest::Approx(1e-3));
    CHECK(grid.back() == doctest::Approx(1e3));
    const auto b = sensitivity_bounds(SensitivitySpec::reciprocal(1.0, 2.0), grid);
    CHECK(b[0] == doctest::Approx(1e3));
    CHECK(b[1] == doctest::Approx(2e3));
}

TEST_CASE("constant-sensitivity hypothesis checker") {
    ModelParams p = symmetric();
    CHECK(check_theorem12(p, 100.0, 100.0, 2, false).verdict == Theorem12Verdict::case_i);

    p.mu1 = p.mu2 = 10.0;
    const Theorem12Report r = check_theorem12(p, 1.0, 1.0, 3, true);
    CHECK(r.verdict == Theorem12Verdict::case_ii);
    // 10 − 3/4, and 10 + 5/2 + 5/2 − 3/2 for the first cross inequality.
    CHECK(r.slack[0] == doctest::Approx(10.0 - 0.75));
    CHECK(r.slack[2] == doctest::Approx(10.0 + 2.5 + 2.5 - 1.5));
    CHECK(r.slack[3] == doctest::Approx(10.0 + 2.5 + 5.0 - 1.5));

    CHECK(check_theorem12(p, 1.0, 1.0, 3, false).verdict == Theorem12Verdict::neither);
    p.mu1 = p.mu2 = 0.1;
    CHECK(check_theorem12(p, 1.0, 1.0, 3, true).verdict == Theorem12Verdict::neither);
}

TEST_CASE("property: raising a kinetic rate never loses case (ii)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.05, 0.95), pos(0.05, 5.0);
    for (int trial = 0; trial < 2000; ++trial) {
        ModelParams p;
        p.a1 = unit(rng);
        p.a2 = unit(rng);
        p.mu1 = pos(rng);
        p.mu2 = pos(rng);
        const double chi1 = pos(rng), chi2 = pos(rng);
        const int n = 3 + static_cast<int>(rng() % 3);
        const bool before = check_theorem12(p, chi1, chi2, n, true).verdict ==
                            Theorem12Verdict::case_ii;
        ModelParams q = p;
        if (trial % 2) q.mu1 *= 1.0 + pos(rng);
        else q.mu2 *= 1.0 + pos(rng);
        const bool after = check_theorem12(q, chi1, chi2, n, true).verdict ==
                           Theorem12Verdict::case_ii;
        CHECK((!before || after));
    }
}

TEST_CASE("signal-dependent hypothesis checker") {
    ModelParams p = symmetric();
    const auto grid = default_sample_grid();
    const int n = 2;
    const double p_exp = 3.0;

    CHECK(check_theorem13(SensitivitySpec::constant(0.0, 0.0), p, n, 0.5, p_exp, 1.0, grid)
              .satisfied_on_grid);

    // Reduces to K ≤ 1/√3 for unit diffusivities and p = 3.
    CHECK(check_theorem13(SensitivitySpec::reciprocal(0.5, 0.5), p, n, 0.5, p_exp, 1.0, grid)
              .satisfied_on_grid);
    const Theorem13Report bad =
        check_theorem13(SensitivitySpec::reciprocal(1.0, 0.5), p, n, 0.5, p_exp, 10.0, grid);
    CHECK_FALSE(bad.satisfied_on_grid);
    REQUIRE(bad.first_violation);
    CHECK(bad.first_violation->species == Species::u);
    CHECK(bad.first_violation->w == doctest::Approx(grid.front()));
    CHECK(bad.first_violation->which == Theorem13Violation::Which::differential);

    const Theorem13Report growth =
        check_theorem13(SensitivitySpec::reciprocal(0.5, 0.5), p, n, 0.5, p_exp, 0.4, grid);
    CHECK_FALSE(growth.satisfied_on_grid);
    REQUIRE(growth.first_violation);
    CHECK(growth.first_violation->which == Theorem13Violation::Which::growth);

    const Theorem13Report constant =
        check_theorem13(SensitivitySpec::constant(0.2, 0.2), p, n, 0.5, p_exp, 1e9, grid);
    CHECK_FALSE(constant.satisfied_on_grid);
    CHECK(constant.first_violation->w == doctest::Approx(grid.front()));

    CHECK_THROWS(check_theorem13(SensitivitySpec::constant(0, 0), p, n, 0.5, p_exp, 1.0, {}));
    CHECK_THROWS(check_theorem13(SensitivitySpec::constant(0, 0), p, n, 0.5, 2.0, 1.0, grid));
    CHECK_THROWS(check_theorem13(SensitivitySpec::constant(0, 0), p, n, 1.5, p_exp, 1.0, grid));
    CHECK_THROWS(
        check_theorem13(SensitivitySpec::constant(0, 0), p, n, 0.5, p_exp, 1.0, {2.0, 1.0}));
}

TEST_CASE("signal-dependent checker flips at the symbolic threshold") {
    ModelParams p = symmetric();
    const auto grid = default_sample_grid();
    const double k_star = 1.0 / std::sqrt(3.0);
    for (double k : {0.98 * k_star, 0.999 * k_star})
        CHECK(check_theorem13(SensitivitySpec::reciprocal(k, k), p, 2, 0.5, 3.0, 1.0, grid)
                  .satisfied_on_grid);
    for (double k : {1.001 * k_star, 1.02 * k_star})
        CHECK_FALSE(check_theorem13(SensitivitySpec::reciprocal(k, k), p, 2, 0.5, 3.0, 1.0, grid)
                        .satisfied_on_grid);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "chemostab/error.hpp"
#include "chemostab/quadform.hpp"

using namespace chemostab;

namespace {

/// Smallest eigenvalue of the symmetric matrix from the trigonometric solution
/// of its characteristic cubic.
double smallest_eigenvalue(const QuadForm3& q) {
    const double a11 = q.a, a22 = q.d, a33 = q.f;
    const double a12 = q.b / 2, a13 = q.c / 2, a23 = q.e / 2;
    const double p1 = a12 * a12 + a13 * a13 + a23 * a23;
    const double tr = (a11 + a22 + a33) / 3.0;
    const double p2 = (a11 - tr) * (a11 - tr) + (a22 - tr) * (a22 - tr) +
                      (a33 - tr) * (a33 - tr) + 2.0 * p1;
    if (p2 == 0.0) return tr;
    const double pp = std::sqrt(p2 / 6.0);
    const double b11 = (a11 - tr) / pp, b22 = (a22 - tr) / pp, b33 = (a33 - tr) / pp;
    const double b12 = a12 / pp, b13 = a13 / pp, b23 = a23 / pp;
    const double detb = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13) +
                        b13 * (b12 * b23 - b22 * b13);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return tr + 2.0 * pp * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

QuadForm3 random_positive_form(std::mt19937_64& rng) {
    // L Lᵀ + c I with a random lower-triangular L.
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> shift(0.01, 1.0);
    const double l11 = n(rng), l21 = n(rng), l22 = n(rng), l31 = n(rng), l32 = n(rng),
                 l33 = n(rng), c = shift(rng);
    QuadForm3 q;
    q.a = l11 * l11 + c;
    q.d = l21 * l21 + l22 * l22 + c;
    q.f = l31 * l31 + l32 * l32 + l33 * l33 + c;
    q.b = 2.0 * l11 * l21;
    q.c = 2.0 * l11 * l31;
    q.e = 2.0 * (l21 * l31 + l22 * l32);
    return q;
}

}  // namespace

TEST_CASE("minors of reference forms") {
    const QuadForm3 id{1, 0, 0, 1, 0, 1};
    Minors m = minors_at(id, 0.0);
    CHECK(m.g1 == 1.0);
    CHECK(m.g2 == 1.0);
    CHECK(m.g3 == 1.0);
    m = minors_at(id, 0.5);
    CHECK(m.g1 == 0.5);
    CHECK(m.g2 == 0.25);
    CHECK(m.g3 == 0.125);

    const QuadForm3 energy{0.5, 1.0, -1.0, 1.5, -1.0, 1.0};
    m = minors_at(energy, 0.0);
    CHECK(m.g1 == doctest::Approx(0.5));
    CHECK(m.g2 == doctest::Approx(0.5));
    CHECK(m.g3 == doctest::Approx(0.25));
}

TEST_CASE("determinant uses the c squared d term") {
    // Asymmetric in c and d so the two readings differ: c²d/4 = 4·3/4, cd²/4 = 2·9/4.
    const QuadForm3 q{2.0, 0.0, 2.0, 3.0, 0.0, 4.0};
    const double expected = 2.0 * 3.0 * 4.0 - 4.0 * 3.0 / 4.0;
    CHECK(minors_at(q, 0.0).g3 == doctest::Approx(expected));
}

TEST_CASE("hypothesis predicate") {
    CHECK(satisfies_hypothesis({1, 0, 0, 1, 0, 1}));
    CHECK(satisfies_hypothesis({0.5, 1.0, -1.0, 1.5, -1.0, 1.0}));
    CHECK_FALSE(satisfies_hypothesis({1, 3, 0, 1, 0, 1}));
    CHECK(minors_at({1, 3, 0, 1, 0, 1}, 0.0).g2 == doctest::Approx(-1.25));
    // A zero minor is not enough.
    CHECK_FALSE(satisfies_hypothesis({1, 2, 0, 1, 0, 1}));
    CHECK_FALSE(satisfies_hypothesis({0, 0, 0, 1, 0, 1}));
}

TEST_CASE("maximal margin") {
    CHECK(max_margin({1, 0, 0, 1, 0, 1}, 1e-10) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(max_margin({2, 0, 0, 3, 0, 5}, 1e-10) == doctest::Approx(2.0).epsilon(1e-9));
    const QuadForm3 energy{0.5, 1.0, -1.0, 1.5, -1.0, 1.0};
    const double m = max_margin(energy, 1e-12);
    CHECK(m > 0.0);
    CHECK(m < 0.5);
    CHECK(m == doctest::Approx(smallest_eigenvalue(energy)).epsilon(1e-10));
    CHECK_THROWS_AS(max_margin({1, 3, 0, 1, 0, 1}), DomainError);
    CHECK_THROWS_AS(max_margin({1, 0, 0, 1, 0, 1}, 0.0), DomainError);
}

TEST_CASE("property: evaluate matches the symmetric matrix") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n(0.0, 2.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const QuadForm3 q{n(rng), n(rng), n(rng), n(rng), n(rng), n(rng)};
        const std::array<double, 3> y{n(rng), n(rng), n(rng)};
        const auto a = q.matrix();
        double bilinear = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) bilinear += y[i] * a[i][j] * y[j];
        CHECK(q.evaluate(y) == doctest::Approx(bilinear).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: margin equals the smallest eigenvalue and bounds the form") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const QuadForm3 q = random_positive_form(rng);
        REQUIRE(satisfies_hypothesis(q));
        const double tol = 1e-12;
        const double m = max_margin(q, tol);
        const double scale = std::max({q.a, q.d, q.f, 1.0});
        CHECK(std::abs(m - smallest_eigenvalue(q)) <= 1e-9 * scale);
        for (int k = 0; k < 200; ++k) {
            const std::array<double, 3> y{n(rng), n(rng), n(rng)};
            const double norm2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
            CHECK(q.evaluate(y) >= (m - 1e-9 * scale) * norm2);
        }
    }
}

TEST_CASE("property: minors decrease as the shift grows") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 300; ++trial) {
        const QuadForm3 q = random_positive_form(rng);
        const double m = max_margin(q);
        for (double frac : {0.0, 0.25, 0.5, 0.9, 0.999}) {
            const Minors g = minors_at(q, frac * m);
            CHECK(g.g1 > 0.0);
            CHECK(g.g2 > 0.0);
            CHECK(g.g3 > 0.0);
        }
        const Minors past = minors_at(q, m * 1.001 + 1e-9);
        CHECK((past.g1 <= 0.0 || past.g2 <= 0.0 || past.g3 <= 0.0));
    }
}

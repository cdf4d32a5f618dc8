#include "chemostab/quadform.hpp"

#include <algorithm>

#include "chemostab/error.hpp"

namespace chemostab {

double QuadForm3::evaluate(const std::array<double, 3>& y) const {
    return a * y[0] * y[0] + b * y[0] * y[1] + c * y[0] * y[2] + d * y[1] * y[1] +
           e * y[1] * y[2] + f * y[2] * y[2];
}

std::array<std::array<double, 3>, 3> QuadForm3::matrix() const {
    return {{{a, b / 2.0, c / 2.0}, {b / 2.0, d, e / 2.0}, {c / 2.0, e / 2.0, f}}};
}

Minors minors_at(const QuadForm3& q, double eps) {
    const double a = q.a - eps;
    const double d = q.d - eps;
    const double f = q.f - eps;
    const double hb = q.b / 2.0;
    const double hc = q.c / 2.0;
    const double he = q.e / 2.0;
    Minors m;
    m.g1 = a;
    m.g2 = a * d - hb * hb;
    // Cofactor expansion along the first row.
    m.g3 = a * (d * f - he * he) - hb * (hb * f - he * hc) + hc * (hb * he - d * hc);
    return m;
}

bool satisfies_hypothesis(const QuadForm3& q) {
    const Minors m = minors_at(q, 0.0);
    return m.g1 > 0.0 && m.g2 > 0.0 && m.g3 > 0.0;
}

double max_margin(const QuadForm3& q, double tol) {
    if (!(tol > 0.0)) throw DomainError("max_margin: tol must be positive");
    if (!satisfies_hypothesis(q))
        throw DomainError("max_margin: leading minors are not all positive");

    auto positive = [&](double eps) {
        const Minors m = minors_at(q, eps);
        return m.g1 > 0.0 && m.g2 > 0.0 && m.g3 > 0.0;
    };
    double lo = 0.0;
    double hi = std::min({q.a, q.d, q.f});
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (positive(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace chemostab

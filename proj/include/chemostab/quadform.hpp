#pragma once

#include <array>

namespace chemostab {

/// a y1² + b y1 y2 + c y1 y3 + d y2² + e y2 y3 + f y3².
/// b, c, e are the full cross coefficients; the symmetric matrix carries b/2, c/2, e/2.
struct QuadForm3 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0, f = 0.0;

    double evaluate(const std::array<double, 3>& y) const;
    /// Row-major symmetric matrix.
    std::array<std::array<double, 3>, 3> matrix() const;
};

/// Leading principal minors of the matrix shifted by −ε·I.
struct Minors {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
};

Minors minors_at(const QuadForm3& q, double eps);

/// a > 0, ad − b²/4 > 0 and det > 0 where
/// det = adf + bce/4 − c²d/4 − b²f/4 − ae²/4. A zero minor fails.
bool satisfies_hypothesis(const QuadForm3& q);

/// Largest ε (within tol) with every minor of the shifted matrix positive,
/// found by bisection on [0, min(a, d, f)]. This is the smallest eigenvalue.
/// Throws DomainError when the hypothesis fails or tol ≤ 0.
double max_margin(const QuadForm3& q, double tol = 1e-12);

}  // namespace chemostab

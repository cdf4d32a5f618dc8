#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace chemostab {

/// Pairwise (cascade) summation; result does not depend on thread count.
double pairwise_sum(std::span<const double> values);

struct ScalarMax {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops when the bracket is narrower than tol * (1 + |x|).
ScalarMax golden_section_maximize(const std::function<double(double)>& fn, double lo,
                                  double hi, double tol = 1e-12);

/// Maximizes fn over (lo, hi) with 0 < lo < hi: scans `points` log-uniform
/// samples, then refines the best bracket with golden-section search in log q.
ScalarMax grid_then_golden_maximize(const std::function<double(double)>& fn, double lo,
                                    double hi, std::size_t points = 2048,
                                    double tol = 1e-13);

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double value);

}  // namespace chemostab

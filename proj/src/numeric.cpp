#include "chemostab/numeric.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace chemostab {

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 64;
    if (values.size() <= kBlock) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ScalarMax golden_section_maximize(const std::function<double(double)>& fn, double lo,
                                  double hi, double tol) {
    static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = fn(x1);
    double f2 = fn(x2);
    for (int iter = 0; iter < 400 && (hi - lo) > tol * (1.0 + std::abs(x1)); ++iter) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = fn(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = fn(x1);
        }
    }
    return f1 >= f2 ? ScalarMax{x1, f1} : ScalarMax{x2, f2};
}

ScalarMax grid_then_golden_maximize(const std::function<double(double)>& fn, double lo,
                                    double hi, std::size_t points, double tol) {
    const double log_lo = std::log(lo);
    const double log_hi = std::log(hi);
    const double step = (log_hi - log_lo) / static_cast<double>(points);

    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points; ++k) {
        const double value = fn(std::exp(log_lo + (static_cast<double>(k) + 0.5) * step));
        if (value > best_value) {
            best_value = value;
            best = k;
        }
    }

    // Bracket one grid cell either side of the best sample, clipped to (lo, hi).
    const double left = log_lo + std::max(0.0, static_cast<double>(best) - 0.5) * step;
    const double right =
        log_lo + std::min(static_cast<double>(points), static_cast<double>(best) + 1.5) * step;
    const ScalarMax refined = golden_section_maximize(
        [&](double y) { return fn(std::exp(y)); }, left, right, tol);

    const double best_x = std::exp(log_lo + (static_cast<double>(best) + 0.5) * step);
    if (refined.value >= best_value) return {std::exp(refined.x), refined.value};
    return {best_x, best_value};
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace chemostab

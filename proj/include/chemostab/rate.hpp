#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemostab/solver.hpp"

namespace chemostab {

/// value(t) ≈ C·exp(−ell·t), fitted by least squares on log(value).
struct RateEstimate {
    double ell = 0.0;
    double C = 0.0;
    /// Coefficient of determination on the log scale; NaN when log values are constant.
    double r2 = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t samples = 0;
    /// Slope indistinguishable from zero.
    bool no_decay = false;
};

/// Samples at or below this are treated as converged to roundoff.
inline constexpr double kLogFloor = 10.0 * 2.220446049250313e-16;

/// Fits samples with t_start ≤ t ≤ t_end and value > kLogFloor.
/// Throws DomainError on a negative value in the window or fewer than 8 usable samples.
RateEstimate fit_rate(std::span<const double> times, std::span<const double> values,
                      double t_start, double t_end);

struct Certification {
    std::string field;
    enum class Status { certified, not_certified, vacuous } status = Status::not_certified;
    std::optional<RateEstimate> estimate;
};

/// Certifies ‖u−u*‖∞, ‖v−v*‖∞, ‖w−w*‖∞ as exponentially decaying: fitted
/// ell > threshold_ell and r2 > 0.9 on the window [lo, hi] of the total time.
/// A field whose window has fewer than 8 samples above the floor is `vacuous`.
std::array<Certification, 3> certify(const std::vector<Diagnostics>& diagnostics,
                                     double threshold_ell, double window_lo = 0.25,
                                     double window_hi = 0.90);

std::string to_string(Certification::Status s);

}  // namespace chemostab

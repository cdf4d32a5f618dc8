#pragma once

#include <optional>
#include <string>

#include "chemostab/model.hpp"

namespace chemostab {

/// Parameters that shape the stability region in the (s, t) plane.
struct RegionParams {
    double a1 = 0.5, a2 = 0.5;
    double alpha = 1.0, beta = 1.0, gamma = 1.0;

    static RegionParams from(const ModelParams& p);
};

/// s = u* M1² / (4 d1 d3 a1 μ1), t = v* M2² / (4 d2 d3 a2 μ2).
struct RegionPoint {
    double s = 0.0;
    double t = 0.0;
};

/// Open interval I = {q > 0 : 4q − (1+q)² a1 a2 > 0}.
struct QInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double q) const { return q > lo && q < hi; }
};

/// Throws DomainError unless a1 a2 ∈ (0,1) and α, β, γ > 0.
void validate(const RegionParams& rp);

QInterval interval_I(const RegionParams& rp);

/// Denominator a1 α² q + a2 β² − a1 a2 α β (1+q); positive on I.
double f_denominator(const RegionParams& rp, double q);

/// f(q) = γ (4q − (1+q)² a1 a2) / (a1 α² q + a2 β² − a1 a2 α β (1+q)).
/// Throws DomainError for q outside the closure of I.
double f_of_q(const RegionParams& rp, double q);
/// g(q) = f(q) / q.
double g_of_q(const RegionParams& rp, double q);

/// Argmax of f(q)/(1+q) over I.
double q0_maximizer(const RegionParams& rp, double tol = 1e-13);

/// Points within this margin of a region boundary count as outside.
inline constexpr double kBoundaryMargin = 1e-12;

struct Membership {
    bool inside = false;
    /// Slack of the defining strict inequality (largest over q for the new region).
    double margin = 0.0;
    /// The q realizing `margin` (1 for Bai–Winkler, q0 for Mizukami).
    double q = 1.0;
};

/// s + t < f(1).
Membership in_region_bw(const RegionParams& rp, const RegionPoint& pt);
/// max(s, t) < f(q0)/(1+q0).
Membership in_region_miz(const RegionParams& rp, const RegionPoint& pt);
/// ∃ q ∈ I with s + q t < f(q); margin = max over I of f(q) − s − q t.
Membership in_region_new(const RegionParams& rp, const RegionPoint& pt);

enum class ClosedFormVariant {
    corrected,
    /// Literal variant of h1, with an extra factor γ on the 2 a2 β² term
    /// of its t coefficient.
    literal,
};

/// The explicit description of the new region through h1, h2⁺, h2⁻ and the
/// bound t < a2 γ / (α (a2 β − α)₊).
bool closed_form_membership(const RegionParams& rp, const RegionPoint& pt,
                            ClosedFormVariant variant = ClosedFormVariant::corrected);

/// Throws ConfigError via validate() on invalid parameters.
RegionPoint point_from_params(const ModelParams& p);

/// A (q, δ) pair certifying the energy estimate.
struct Witness {
    double q = 1.0;
    double delta = 0.0;
    /// max over q of f(q) − s − q t.
    double margin = 0.0;
    /// Open interval that δ must lie in.
    double delta_lo = 0.0;
    double delta_hi = 0.0;
};

/// δ ∈ ((u* a2 μ2 M1²/(4d1) + v* q a1 μ1 M2²/(4d2)) / d3,  a1 μ1 a2 μ2 f(q));
/// δ is the geometric mean of the ends, or the midpoint when the lower end is 0.
/// Throws DomainError when the parameters are outside the new region.
Witness select_q_delta(const ModelParams& p);

struct DerivativeReport {
    double df_at_1 = 0.0;
    double dg_at_1 = 0.0;
    /// Central finite differences of f_of_q and g_of_q at q = 1.
    double df_fd = 0.0;
    double dg_fd = 0.0;
    /// Analytic and finite-difference values agree to 1e-6 relative.
    bool consistent = false;
};

/// df/dq(1) = 4γ(1−a1a2) a2β (β − a1α) / D1²,
/// dg/dq(1) = 4γ(1−a1a2) a1α (a2β − α) / D1², D1 = a1α² + a2β² − 2a1a2αβ.
DerivativeReport derivative_checks(const RegionParams& rp);

enum class InclusionCase {
    /// a1 α ≠ β and a2 β ≠ α.
    generic,
    /// a1 α = β: q = 1 maximizes f but not g.
    f_flat_at_1,
    /// a2 β = α: q = 1 maximizes g but not f.
    g_flat_at_1,
};

InclusionCase classify_inclusion_case(const RegionParams& rp);

struct AxisWitnesses {
    /// (s, 0) with f(1) < s < max f, when q = 1 does not maximize f.
    std::optional<RegionPoint> s_axis;
    /// (0, t) with g(1) < t < max g, when q = 1 does not maximize g.
    std::optional<RegionPoint> t_axis;
    double q_f = 1.0, f_max = 0.0;
    double q_g = 1.0, g_max = 0.0;
};

AxisWitnesses axis_witnesses(const RegionParams& rp);

/// A point inside the new region but outside the Bai–Winkler region.
/// Throws Error if none is found on either axis.
RegionPoint strict_inclusion_witness(const RegionParams& rp);

std::string to_string(InclusionCase c);

}  // namespace chemostab

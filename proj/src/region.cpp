#include "chemostab/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemostab/error.hpp"
#include "chemostab/numeric.hpp"

namespace chemostab {

namespace {

double product(const RegionParams& rp) { return rp.a1 * rp.a2; }

// Relative closeness for the degenerate-case classification.
bool nearly_equal(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
}

}  // namespace

RegionParams RegionParams::from(const ModelParams& p) {
    return RegionParams{p.a1, p.a2, p.alpha, p.beta, p.gamma};
}

void validate(const RegionParams& rp) {
    const double prod = product(rp);
    if (!(rp.a1 > 0.0 && rp.a2 > 0.0) || !(prod < 1.0))
        throw DomainError("region: requires a1, a2 > 0 and a1*a2 < 1");
    if (!(rp.alpha > 0.0 && rp.beta > 0.0 && rp.gamma > 0.0))
        throw DomainError("region: alpha, beta, gamma must be positive");
}

QInterval interval_I(const RegionParams& rp) {
    validate(rp);
    const double prod = product(rp);
    // Roots of a1a2 q² + (2a1a2 − 4) q + a1a2 = 0; their product is 1.
    const double hi = ((2.0 - prod) + 2.0 * std::sqrt(1.0 - prod)) / prod;
    return QInterval{1.0 / hi, hi};
}

double f_denominator(const RegionParams& rp, double q) {
    return rp.a1 * rp.alpha * rp.alpha * q + rp.a2 * rp.beta * rp.beta -
           product(rp) * rp.alpha * rp.beta * (1.0 + q);
}

double f_of_q(const RegionParams& rp, double q) {
    const QInterval I = interval_I(rp);
    constexpr double kRel = 1e-12;
    if (!(q >= I.lo * (1.0 - kRel) && q <= I.hi * (1.0 + kRel)))
        throw DomainError("f_of_q: q lies outside the closure of I");
    // 4q − (1+q)² a1a2 in factored form, which stays accurate near the roots.
    const double numerator = std::max(0.0, product(rp) * (q - I.lo) * (I.hi - q));
    if (numerator == 0.0) return 0.0;
    const double denominator = f_denominator(rp, q);
    if (!(denominator > 0.0))
        throw DomainError("f_of_q: nonpositive denominator inside I");
    return rp.gamma * numerator / denominator;
}

double g_of_q(const RegionParams& rp, double q) { return f_of_q(rp, q) / q; }

double q0_maximizer(const RegionParams& rp, double tol) {
    const QInterval I = interval_I(rp);
    return grid_then_golden_maximize([&](double q) { return f_of_q(rp, q) / (1.0 + q); },
                                     I.lo, I.hi, 2048, tol)
        .x;
}

Membership in_region_bw(const RegionParams& rp, const RegionPoint& pt) {
    const double margin = f_of_q(rp, 1.0) - pt.s - pt.t;
    const bool valid = pt.s >= 0.0 && pt.t >= 0.0;
    return Membership{valid && margin > kBoundaryMargin, margin, 1.0};
}

Membership in_region_miz(const RegionParams& rp, const RegionPoint& pt) {
    const double q0 = q0_maximizer(rp);
    const double margin = f_of_q(rp, q0) / (1.0 + q0) - std::max(pt.s, pt.t);
    const bool valid = pt.s >= 0.0 && pt.t >= 0.0;
    return Membership{valid && margin > kBoundaryMargin, margin, q0};
}

Membership in_region_new(const RegionParams& rp, const RegionPoint& pt) {
    const QInterval I = interval_I(rp);
    const ScalarMax best = grid_then_golden_maximize(
        [&](double q) { return f_of_q(rp, q) - pt.s - q * pt.t; }, I.lo, I.hi);
    const bool valid = pt.s >= 0.0 && pt.t >= 0.0;
    return Membership{valid && best.value > kBoundaryMargin, best.value, best.x};
}

bool closed_form_membership(const RegionParams& rp, const RegionPoint& pt,
                            ClosedFormVariant variant) {
    validate(rp);
    const double a1 = rp.a1, a2 = rp.a2, al = rp.alpha, be = rp.beta, ga = rp.gamma;
    const double s = pt.s, t = pt.t;
    if (s < 0.0 || t < 0.0) return false;

    const double excess = a2 * be - al;
    if (excess > 0.0 && !(t < a2 * ga / (al * excess))) return false;

    const double p = a1 * a2;
    const double x = al - a2 * be;  // α − a2β
    const double y = be - a1 * al;  // β − a1α
    const double stray = variant == ClosedFormVariant::literal ? ga : 1.0;
    const double h1 = a1 * a1 * al * al * x * x * s * s + a2 * a2 * be * be * y * y * t * t -
                      2.0 * p * al * be * x * y * s * t -
                      4.0 * ga *
                          (2.0 * a1 * al * al - 2.0 * p * al * be + a1 * a2 * a2 * be * be -
                           a1 * a1 * a2 * al * al) *
                          s -
                      4.0 * ga *
                          (2.0 * a2 * be * be * stray - 2.0 * p * al * be +
                           a1 * a1 * a2 * al * al - a1 * a2 * a2 * be * be) *
                          t +
                      16.0 * ga * ga * (1.0 - p);

    const double root = std::sqrt(1.0 - p);
    auto h2 = [&](double sign) {
        return a1 * al * x * s +
               (al * (4.0 - 2.0 * p + sign * 4.0 * root) * x / a2 + a2 * be * y) * t +
               sign * 4.0 * ga * root;
    };
    return h1 > 0.0 && h2(1.0) > 0.0 && h2(-1.0) < 0.0;
}

RegionPoint point_from_params(const ModelParams& p) {
    validate(p);
    const SteadyState ss = steady_state(p);
    return RegionPoint{ss.u_star * p.M1 * p.M1 / (4.0 * p.d1 * p.d3 * p.a1 * p.mu1),
                       ss.v_star * p.M2 * p.M2 / (4.0 * p.d2 * p.d3 * p.a2 * p.mu2)};
}

Witness select_q_delta(const ModelParams& p) {
    const RegionParams rp = RegionParams::from(p);
    const RegionPoint pt = point_from_params(p);
    const Membership m = in_region_new(rp, pt);
    if (!m.inside)
        throw DomainError(
            "select_q_delta: stability condition violated, no q in I gives s + q t < f(q)");

    const SteadyState ss = steady_state(p);
    Witness w;
    w.q = m.q;
    w.margin = m.margin;
    w.delta_lo = (ss.u_star * p.a2 * p.mu2 * p.M1 * p.M1 / (4.0 * p.d1) +
                  ss.v_star * w.q * p.a1 * p.mu1 * p.M2 * p.M2 / (4.0 * p.d2)) /
                 p.d3;
    w.delta_hi = p.a1 * p.mu1 * p.a2 * p.mu2 * f_of_q(rp, w.q);
    w.delta = w.delta_lo > 0.0 ? std::sqrt(w.delta_lo * w.delta_hi) : 0.5 * w.delta_hi;
    if (!(w.delta > w.delta_lo && w.delta < w.delta_hi))
        throw DomainError("select_q_delta: empty delta interval");
    return w;
}

DerivativeReport derivative_checks(const RegionParams& rp) {
    const QInterval I = interval_I(rp);
    const double a1 = rp.a1, a2 = rp.a2, al = rp.alpha, be = rp.beta, ga = rp.gamma;
    const double d1 = a1 * al * al + a2 * be * be - 2.0 * a1 * a2 * al * be;
    const double lead = 4.0 * ga * (1.0 - a1 * a2) / (d1 * d1);

    DerivativeReport r;
    r.df_at_1 = lead * a2 * be * (be - a1 * al);
    r.dg_at_1 = lead * a1 * al * (a2 * be - al);

    // Fourth-order central differences.
    const double h = std::min({1e-3, (I.hi - 1.0) / 4.0, (1.0 - I.lo) / 4.0});
    auto central = [&](auto&& fn) {
        return (8.0 * (fn(1.0 + h) - fn(1.0 - h)) - (fn(1.0 + 2.0 * h) - fn(1.0 - 2.0 * h))) /
               (12.0 * h);
    };
    r.df_fd = central([&](double q) { return f_of_q(rp, q); });
    r.dg_fd = central([&](double q) { return g_of_q(rp, q); });

    const double floor = 1e-12 * f_of_q(rp, 1.0);
    auto agrees = [&](double an, double fd) {
        return std::abs(an - fd) <= 1e-6 * std::max(std::abs(an), std::abs(fd)) + floor;
    };
    r.consistent = agrees(r.df_at_1, r.df_fd) && agrees(r.dg_at_1, r.dg_fd);
    return r;
}

InclusionCase classify_inclusion_case(const RegionParams& rp) {
    validate(rp);
    if (nearly_equal(rp.a1 * rp.alpha, rp.beta)) return InclusionCase::f_flat_at_1;
    if (nearly_equal(rp.a2 * rp.beta, rp.alpha)) return InclusionCase::g_flat_at_1;
    return InclusionCase::generic;
}

AxisWitnesses axis_witnesses(const RegionParams& rp) {
    const QInterval I = interval_I(rp);
    const double f1 = f_of_q(rp, 1.0);
    const ScalarMax fmax =
        grid_then_golden_maximize([&](double q) { return f_of_q(rp, q); }, I.lo, I.hi);
    const ScalarMax gmax =
        grid_then_golden_maximize([&](double q) { return g_of_q(rp, q); }, I.lo, I.hi);

    AxisWitnesses out;
    out.q_f = fmax.x;
    out.f_max = fmax.value;
    out.q_g = gmax.x;
    out.g_max = gmax.value;
    constexpr double kGain = 1e-9;
    if (fmax.value > f1 * (1.0 + kGain)) out.s_axis = RegionPoint{0.5 * (f1 + fmax.value), 0.0};
    if (gmax.value > f1 * (1.0 + kGain)) out.t_axis = RegionPoint{0.0, 0.5 * (f1 + gmax.value)};
    return out;
}

RegionPoint strict_inclusion_witness(const RegionParams& rp) {
    const AxisWitnesses aw = axis_witnesses(rp);
    const double f1 = f_of_q(rp, 1.0);
    std::optional<RegionPoint> chosen;
    if (aw.s_axis && aw.t_axis)
        chosen = (aw.f_max - f1) >= (aw.g_max - f1) ? aw.s_axis : aw.t_axis;
    else
        chosen = aw.s_axis ? aw.s_axis : aw.t_axis;

    if (!chosen || !in_region_new(rp, *chosen).inside || in_region_bw(rp, *chosen).inside)
        throw Error("strict_inclusion_witness: no witness found on either axis");
    return *chosen;
}

std::string to_string(InclusionCase c) {
    switch (c) {
        case InclusionCase::generic: return "generic (a1*alpha != beta, a2*beta != alpha)";
        case InclusionCase::f_flat_at_1: return "a1*alpha = beta (q=1 maximizes f)";
        case InclusionCase::g_flat_at_1: return "a2*beta = alpha (q=1 maximizes g)";
    }
    return "generic";
}

}  // namespace chemostab

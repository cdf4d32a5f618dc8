#include "chemostab/model.hpp"

#include <algorithm>
#include <cmath>

#include "chemostab/error.hpp"

namespace chemostab {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError(std::string(name) + " must be positive and finite");
}

std::size_t index_of(Species s) { return s == Species::u ? 0 : 1; }

}  // namespace

void validate(const ModelParams& p) {
    require_positive(p.d1, "d1");
    require_positive(p.d2, "d2");
    require_positive(p.d3, "d3");
    require_positive(p.mu1, "mu1");
    require_positive(p.mu2, "mu2");
    require_positive(p.alpha, "alpha");
    require_positive(p.beta, "beta");
    require_positive(p.gamma, "gamma");
    if (!(p.a1 > 0.0 && p.a1 < 1.0)) throw ConfigError("a1 must lie in (0,1)");
    if (!(p.a2 > 0.0 && p.a2 < 1.0)) throw ConfigError("a2 must lie in (0,1)");
    if (!(p.M1 >= 0.0) || !std::isfinite(p.M1)) throw ConfigError("M1 must be nonnegative");
    if (!(p.M2 >= 0.0) || !std::isfinite(p.M2)) throw ConfigError("M2 must be nonnegative");
}

SteadyState steady_state(const ModelParams& p) {
    if (!(p.a1 > 0.0 && p.a1 < 1.0 && p.a2 > 0.0 && p.a2 < 1.0))
        throw DomainError("steady_state: coexistence requires a1, a2 in (0,1)");
    if (!(p.gamma > 0.0)) throw DomainError("steady_state: gamma must be positive");
    const double denom = 1.0 - p.a1 * p.a2;
    SteadyState ss;
    ss.u_star = (1.0 - p.a1) / denom;
    ss.v_star = (1.0 - p.a2) / denom;
    ss.w_star = (p.alpha * ss.u_star + p.beta * ss.v_star) / p.gamma;
    return ss;
}

SensitivitySpec SensitivitySpec::constant(double chi1, double chi2) {
    if (!(chi1 >= 0.0 && chi2 >= 0.0)) throw ConfigError("sensitivities must be nonnegative");
    SensitivitySpec spec;
    spec.kind_ = Kind::constant;
    spec.coeff_ = {chi1, chi2};
    return spec;
}

SensitivitySpec SensitivitySpec::reciprocal(double k1, double k2) {
    if (!(k1 >= 0.0 && k2 >= 0.0)) throw ConfigError("K1, K2 must be nonnegative");
    SensitivitySpec spec;
    spec.kind_ = Kind::reciprocal;
    spec.coeff_ = {k1, k2};
    return spec;
}

SensitivitySpec SensitivitySpec::tabulated(std::vector<double> w, std::vector<double> chi1,
                                           std::vector<double> chi2) {
    if (w.empty() || w.size() != chi1.size() || w.size() != chi2.size())
        throw ConfigError("tabulated sensitivity: table columns must be nonempty and equal length");
    if (!std::is_sorted(w.begin(), w.end()) ||
        std::adjacent_find(w.begin(), w.end()) != w.end())
        throw ConfigError("tabulated sensitivity: w must be strictly increasing");
    for (std::size_t k = 0; k < w.size(); ++k)
        if (!(chi1[k] >= 0.0 && chi2[k] >= 0.0))
            throw ConfigError("tabulated sensitivity: values must be nonnegative");
    SensitivitySpec spec;
    spec.kind_ = Kind::tabulated;
    spec.table_w_ = std::move(w);
    spec.table_chi_ = {std::move(chi1), std::move(chi2)};
    return spec;
}

double SensitivitySpec::chi(Species s, double w) const {
    const std::size_t i = index_of(s);
    switch (kind_) {
        case Kind::constant:
            return coeff_[i];
        case Kind::reciprocal:
            if (!(w > 0.0)) throw DomainError("reciprocal sensitivity requires w > 0");
            return coeff_[i] / w;
        case Kind::tabulated: {
            const auto& ws = table_w_;
            const auto& cs = table_chi_[i];
            if (w <= ws.front()) return cs.front();
            if (w >= ws.back()) return cs.back();
            const auto hi = static_cast<std::size_t>(
                std::upper_bound(ws.begin(), ws.end(), w) - ws.begin());
            const std::size_t lo = hi - 1;
            const double theta = (w - ws[lo]) / (ws[hi] - ws[lo]);
            return (1.0 - theta) * cs[lo] + theta * cs[hi];
        }
    }
    return 0.0;
}

double SensitivitySpec::dchi(Species s, double w) const {
    const std::size_t i = index_of(s);
    switch (kind_) {
        case Kind::constant:
            return 0.0;
        case Kind::reciprocal:
            if (!(w > 0.0)) throw DomainError("reciprocal sensitivity requires w > 0");
            return -coeff_[i] / (w * w);
        case Kind::tabulated: {
            const double h = std::max(1e-6, 1e-6 * w);
            return (chi(s, w + h) - chi(s, w - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

std::vector<double> default_sample_grid() {
    constexpr int kPoints = 512;
    std::vector<double> grid(kPoints);
    const double lo = std::log(1e-3);
    const double hi = std::log(1e3);
    for (int k = 0; k < kPoints; ++k)
        grid[k] = std::exp(lo + (hi - lo) * k / (kPoints - 1));
    return grid;
}

std::array<double, 2> sensitivity_bounds(const SensitivitySpec& spec,
                                         const std::vector<double>& sample_grid,
                                         double safety) {
    if (spec.kind() == SensitivitySpec::Kind::constant)
        return {spec.coefficients()[0] * safety, spec.coefficients()[1] * safety};
    std::array<double, 2> bounds{0.0, 0.0};
    for (double w : sample_grid) {
        bounds[0] = std::max(bounds[0], spec.chi(Species::u, w));
        bounds[1] = std::max(bounds[1], spec.chi(Species::v, w));
    }
    return {bounds[0] * safety, bounds[1] * safety};
}

Theorem12Report check_theorem12(const ModelParams& p, double chi1, double chi2, int n,
                                bool convex) {
    Theorem12Report report;
    const double nd = n;
    report.slack[0] = p.mu1 - nd * chi1 / 4.0;
    report.slack[1] = p.mu2 - nd * chi2 / 4.0;
    report.slack[2] = p.mu1 + p.a1 * p.mu1 / 2.0 + p.a2 * p.mu2 * chi1 / (2.0 * chi2) -
                      nd * chi1 / 2.0;
    report.slack[3] = p.mu2 + p.a2 * p.mu2 / 2.0 + p.a1 * p.mu1 * chi2 / chi1 - nd * chi2 / 2.0;

    if (n == 2) {
        report.verdict = Theorem12Verdict::case_i;
    } else if (convex && std::all_of(report.slack.begin(), report.slack.end(),
                                     [](double s) { return s > 0.0; })) {
        report.verdict = Theorem12Verdict::case_ii;
    }
    return report;
}

Theorem13Report check_theorem13(const SensitivitySpec& spec, const ModelParams& p, int n,
                                double eta, double p_exp, double C_chi,
                                const std::vector<double>& sample_grid) {
    if (sample_grid.empty()) throw DomainError("check_theorem13: empty sample grid");
    if (!std::is_sorted(sample_grid.begin(), sample_grid.end()) || sample_grid.front() < 0.0)
        throw DomainError("check_theorem13: sample grid must be sorted and nonnegative");
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("check_theorem13: eta must lie in (0,1)");
    if (!(p_exp > n)) throw DomainError("check_theorem13: p must exceed n");

    Theorem13Report report;
    const double d3 = p.d3;
    for (double w : sample_grid) {
        for (Species s : {Species::u, Species::v}) {
            const double di = s == Species::u ? p.d1 : p.d2;
            const double diff = d3 - di;
            const double coeff =
                diff * p_exp + std::sqrt(diff * diff * p_exp * p_exp + 4.0 * di * d3 * p_exp);
            const double chi = spec.chi(s, w);
            const double lhs = 2.0 * di * d3 * spec.dchi(s, w) + coeff * chi * chi;
            const double growth = w * chi;
            report.max_w_chi = std::max(report.max_w_chi, growth);
            if (report.first_violation) continue;
            if (lhs > 0.0) {
                report.first_violation =
                    Theorem13Violation{s, w, Theorem13Violation::Which::differential, lhs};
            } else if (growth > C_chi) {
                report.first_violation =
                    Theorem13Violation{s, w, Theorem13Violation::Which::growth, growth - C_chi};
            }
        }
    }
    report.satisfied_on_grid = !report.first_violation.has_value();
    return report;
}

std::string to_string(Theorem12Verdict v) {
    switch (v) {
        case Theorem12Verdict::case_i: return "case_i";
        case Theorem12Verdict::case_ii: return "case_ii";
        case Theorem12Verdict::neither: return "neither";
    }
    return "neither";
}

}  // namespace chemostab

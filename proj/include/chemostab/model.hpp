#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chemostab {

/// Constants of the two-species chemotaxis-competition system
///
///   u_t = d1 Δu − ∇·(u χ1(w) ∇w) + μ1 u (1 − u − a1 v)
///   v_t = d2 Δv − ∇·(v χ2(w) ∇w) + μ2 v (1 − a2 u − v)
///   w_t = d3 Δw + α u + β v − γ w
///
/// with zero-flux boundaries. M1, M2 bound the sensitivities from above.
struct ModelParams {
    double d1 = 1.0, d2 = 1.0, d3 = 1.0;
    double mu1 = 1.0, mu2 = 1.0;
    double a1 = 0.5, a2 = 0.5;
    double alpha = 1.0, beta = 1.0, gamma = 1.0;
    double M1 = 0.0, M2 = 0.0;
};

/// Throws ConfigError unless all rates are positive, a1, a2 ∈ (0,1) and M1, M2 ≥ 0.
void validate(const ModelParams& p);

/// Coexistence equilibrium.
struct SteadyState {
    double u_star = 0.0;
    double v_star = 0.0;
    double w_star = 0.0;
};

/// u* = (1−a1)/(1−a1 a2), v* = (1−a2)/(1−a1 a2), w* = (α u* + β v*)/γ.
/// Throws DomainError unless a1, a2 ∈ (0,1) and γ > 0.
SteadyState steady_state(const ModelParams& p);

enum class Species { u, v };

/// Signal-dependent sensitivities w ↦ (χ1(w), χ2(w)).
class SensitivitySpec {
public:
    enum class Kind { constant, tabulated, reciprocal };

    static SensitivitySpec constant(double chi1, double chi2);
    /// χi(w) = Ki / w; evaluation requires w > 0.
    static SensitivitySpec reciprocal(double k1, double k2);
    /// Piecewise-linear through (w_k, χi_k), constant beyond the table ends.
    static SensitivitySpec tabulated(std::vector<double> w, std::vector<double> chi1,
                                     std::vector<double> chi2);

    Kind kind() const noexcept { return kind_; }
    /// Constant values (kind constant) or K values (kind reciprocal).
    const std::array<double, 2>& coefficients() const noexcept { return coeff_; }

    double chi(Species s, double w) const;
    /// Analytic for constant and reciprocal; central differences with
    /// h = max(1e-6, 1e-6·w) for tabulated.
    double dchi(Species s, double w) const;

private:
    SensitivitySpec() = default;

    Kind kind_ = Kind::constant;
    std::array<double, 2> coeff_{0.0, 0.0};
    std::vector<double> table_w_;
    std::array<std::vector<double>, 2> table_chi_;
};

/// 512 log-spaced points on [1e-3, 1e3].
std::vector<double> default_sample_grid();

/// (max χ1, max χ2) over the grid times `safety`.
std::array<double, 2> sensitivity_bounds(const SensitivitySpec& spec,
                                         const std::vector<double>& sample_grid,
                                         double safety = 1.0);

// Hypotheses of the constant-sensitivity corollary.

enum class Theorem12Verdict { case_i, case_ii, neither };

struct Theorem12Report {
    Theorem12Verdict verdict = Theorem12Verdict::neither;
    /// Slack (lhs − rhs) of the four inequalities required in case (ii):
    ///   μ1 > nχ1/4,  μ2 > nχ2/4,
    ///   μ1 + a1μ1/2 + a2μ2χ1/(2χ2) > nχ1/2,
    ///   μ2 + a2μ2/2 + a1μ1χ2/χ1 > nχ2/2.
    std::array<double, 4> slack{};
};

Theorem12Report check_theorem12(const ModelParams& p, double chi1, double chi2, int n,
                                bool convex);

// Hypotheses of the signal-dependent corollary, checked on a sample grid.

struct Theorem13Violation {
    Species species = Species::u;
    double w = 0.0;
    enum class Which { differential, growth } which = Which::differential;
    /// Value of the violated left-hand side (minus C_chi for `growth`).
    double excess = 0.0;
};

struct Theorem13Report {
    bool satisfied_on_grid = true;
    std::optional<Theorem13Violation> first_violation;
    /// max over the grid of w·χi(w), i = 1, 2.
    double max_w_chi = 0.0;
};

/// At each sample w checks, for i = 1, 2,
///   2 di d3 χi'(w) + ((d3−di)p + sqrt((d3−di)²p² + 4 di d3 p)) χi(w)² ≤ 0
/// and w χi(w) ≤ C_chi. `eta` is the Hölder exponent of χi and only range-checked.
/// Throws DomainError for an empty, unsorted or negative grid, eta ∉ (0,1), or
/// p_exp ≤ n.
Theorem13Report check_theorem13(const SensitivitySpec& spec, const ModelParams& p, int n,
                                double eta, double p_exp, double C_chi,
                                const std::vector<double>& sample_grid);

std::string to_string(Theorem12Verdict v);

}  // namespace chemostab

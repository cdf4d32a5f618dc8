#pragma once

#include <optional>
#include <vector>

#include "chemostab/model.hpp"
#include "chemostab/quadform.hpp"
#include "chemostab/region.hpp"
#include "chemostab/solver.hpp"

namespace chemostab {

/// E = a2 μ2 A + q a1 μ1 B + δ C with
///   A = ∫ u − u* − u* log(u/u*),  B likewise for v,  C = ½ ∫ (w − w*)².
struct EnergyRecord {
    double time = 0.0;
    double A = 0.0, B = 0.0, C = 0.0, E = 0.0;
    double dist_u2 = 0.0, dist_v2 = 0.0, dist_w2 = 0.0;
    double grad_w2 = 0.0;
    /// Backward difference of E; absent for the first record.
    std::optional<double> E_rate;
};

/// Throws DomainError naming the first cell where u or v is not positive.
EnergyRecord energy(const FieldTriple& fields, const Grid& grid, const SteadyState& ss,
                    const Witness& witness, const ModelParams& p, double time = 0.0);

/// Fills E_rate of every record after the first by backward differences.
/// Throws DomainError unless times strictly increase.
void attach_energy_rates(std::vector<EnergyRecord>& trajectory);

struct DissipationConstants {
    /// Smallest eigenvalue of the (u, v, w) quadratic form.
    double eps1 = 0.0;
    /// d3 δ − a2 μ2 u* M1²/(4 d1) − a1 μ1 v* q M2²/(4 d2).
    double eps2 = 0.0;
    double eps = 0.0;
    QuadForm3 form;
};

/// Form (a2μ1μ2, a1a2μ1μ2(1+q), −δα, a1μ1μ2 q, −δβ, δγ).
QuadForm3 dissipation_form(const ModelParams& p, const Witness& witness);

/// Throws DomainError if eps1 or eps2 is not positive.
DissipationConstants dissipation_constants(const ModelParams& p, const Witness& witness);

struct DecayReport {
    double fraction_satisfied = 0.0;
    /// Largest (E_rate − bound) / max(|bound|, tiny) over violating samples; 0 if none.
    double worst_violation = 0.0;
    std::size_t checked = 0;
    std::size_t satisfied = 0;
};

/// For every record with an E_rate checks
///   E_rate ≤ −eps (dist_u2 + dist_v2 + dist_w2 + grad_w2)(1 − slack) + slack |E_rate|.
/// Requires at least 3 time-ordered records and slack ≥ 0.
DecayReport verify_decay(const std::vector<EnergyRecord>& trajectory,
                         const DissipationConstants& dc, double slack);

}  // namespace chemostab

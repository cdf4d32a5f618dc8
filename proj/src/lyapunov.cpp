#include "chemostab/lyapunov.hpp"

#include <cmath>

#include "chemostab/error.hpp"
#include "chemostab/numeric.hpp"

namespace chemostab {

namespace {

// star·(x/star − 1 − log(x/star)), accurate when x is close to star.
double log_entropy_density(double x, double star) {
    const double y = (x - star) / star;
    if (std::abs(y) < 1e-3) {
        // y − log1p(y) = y²/2 − y³/3 + y⁴/4 − ...
        double term = y * y;
        double sum = 0.0;
        for (int k = 2; k < 12; ++k) {
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * term / k;
            term *= y;
        }
        return star * sum;
    }
    return star * (y - std::log1p(y));
}

}  // namespace

EnergyRecord energy(const FieldTriple& fields, const Grid& grid, const SteadyState& ss,
                    const Witness& witness, const ModelParams& p, double time) {
    check_shape(fields, grid);
    const std::size_t n = grid.cells();
    std::vector<double> a(n), b(n), c(n), du(n), dv(n), dw(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(fields.u[k] > 0.0))
            throw DomainError("energy: u is not positive at cell " + std::to_string(k));
        if (!(fields.v[k] > 0.0))
            throw DomainError("energy: v is not positive at cell " + std::to_string(k));
        a[k] = log_entropy_density(fields.u[k], ss.u_star);
        b[k] = log_entropy_density(fields.v[k], ss.v_star);
        const double ew = fields.w[k] - ss.w_star;
        c[k] = 0.5 * ew * ew;
        du[k] = (fields.u[k] - ss.u_star) * (fields.u[k] - ss.u_star);
        dv[k] = (fields.v[k] - ss.v_star) * (fields.v[k] - ss.v_star);
        dw[k] = ew * ew;
    }
    const double measure = grid.cell_measure();
    EnergyRecord r;
    r.time = time;
    r.A = pairwise_sum(a) * measure;
    r.B = pairwise_sum(b) * measure;
    r.C = pairwise_sum(c) * measure;
    r.E = p.a2 * p.mu2 * r.A + witness.q * p.a1 * p.mu1 * r.B + witness.delta * r.C;
    r.dist_u2 = pairwise_sum(du) * measure;
    r.dist_v2 = pairwise_sum(dv) * measure;
    r.dist_w2 = pairwise_sum(dw) * measure;
    r.grad_w2 = grad_squared_integral(grid, fields.w);
    return r;
}

void attach_energy_rates(std::vector<EnergyRecord>& trajectory) {
    for (std::size_t k = 1; k < trajectory.size(); ++k) {
        const double dt = trajectory[k].time - trajectory[k - 1].time;
        if (!(dt > 0.0)) throw DomainError("energy trajectory: times must strictly increase");
        trajectory[k].E_rate = (trajectory[k].E - trajectory[k - 1].E) / dt;
    }
    if (!trajectory.empty()) trajectory.front().E_rate.reset();
}

QuadForm3 dissipation_form(const ModelParams& p, const Witness& witness) {
    const double q = witness.q;
    const double delta = witness.delta;
    return QuadForm3{p.a2 * p.mu1 * p.mu2,
                     p.a1 * p.a2 * p.mu1 * p.mu2 * (1.0 + q),
                     -delta * p.alpha,
                     p.a1 * p.mu1 * p.mu2 * q,
                     -delta * p.beta,
                     delta * p.gamma};
}

DissipationConstants dissipation_constants(const ModelParams& p, const Witness& witness) {
    const SteadyState ss = steady_state(p);
    DissipationConstants dc;
    dc.form = dissipation_form(p, witness);
    if (!satisfies_hypothesis(dc.form))
        throw DomainError("dissipation_constants: witness does not make the form positive definite");
    dc.eps1 = max_margin(dc.form, 1e-12 * std::max(1.0, dc.form.f));
    dc.eps2 = p.d3 * witness.delta - p.a2 * p.mu2 * ss.u_star * p.M1 * p.M1 / (4.0 * p.d1) -
              p.a1 * p.mu1 * ss.v_star * witness.q * p.M2 * p.M2 / (4.0 * p.d2);
    if (!(dc.eps1 > 0.0 && dc.eps2 > 0.0))
        throw DomainError("dissipation_constants: nonpositive dissipation constant");
    dc.eps = std::min(dc.eps1, dc.eps2);
    return dc;
}

DecayReport verify_decay(const std::vector<EnergyRecord>& trajectory,
                         const DissipationConstants& dc, double slack) {
    if (trajectory.size() < 3) throw DomainError("verify_decay: need at least 3 records");
    if (!(slack >= 0.0)) throw DomainError("verify_decay: slack must be nonnegative");
    for (std::size_t k = 1; k < trajectory.size(); ++k)
        if (!(trajectory[k].time > trajectory[k - 1].time))
            throw DomainError("verify_decay: times must strictly increase");

    DecayReport report;
    for (const EnergyRecord& r : trajectory) {
        if (!r.E_rate) continue;
        const double rate = *r.E_rate;
        const double dissipation = r.dist_u2 + r.dist_v2 + r.dist_w2 + r.grad_w2;
        const double bound = -dc.eps * dissipation * (1.0 - slack) + slack * std::abs(rate);
        ++report.checked;
        if (rate <= bound) {
            ++report.satisfied;
        } else {
            const double scale = std::max(std::abs(bound), 1e-300);
            report.worst_violation = std::max(report.worst_violation, (rate - bound) / scale);
        }
    }
    report.fraction_satisfied =
        report.checked == 0 ? 1.0
                            : static_cast<double>(report.satisfied) / static_cast<double>(report.checked);
    return report;
}

}  // namespace chemostab

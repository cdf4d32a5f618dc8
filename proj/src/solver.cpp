#include "chemostab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "chemostab/error.hpp"
#include "chemostab/numeric.hpp"

namespace chemostab {

namespace {

constexpr double kReciprocalFloor = 1e-12;
constexpr double kNegativeTolerance = 1e-12;
constexpr double kCgRelativeResidual = 1e-10;

double face_chi(const SensitivitySpec& spec, Species s, double w_left, double w_right) {
    double w_face = 0.5 * (w_left + w_right);
    if (spec.kind() == SensitivitySpec::Kind::reciprocal)
        w_face = std::max(w_face, kReciprocalFloor);
    return spec.chi(s, w_face);
}

// Visits every interior face normal to `axis` (0 = x, 1 = y) as
// (lower cell, upper cell, spacing).
template <typename Fn>
void for_each_face_on_axis(const Grid& grid, int axis, Fn&& fn) {
    if (axis == 0) {
        for (std::size_t j = 0; j < grid.ny; ++j)
            for (std::size_t i = 0; i + 1 < grid.nx; ++i)
                fn(grid.index(i, j), grid.index(i + 1, j), grid.hx);
    } else if (grid.dim == 2) {
        for (std::size_t j = 0; j + 1 < grid.ny; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i)
                fn(grid.index(i, j), grid.index(i, j + 1), grid.hy);
    }
}

template <typename Fn>
void for_each_face(const Grid& grid, Fn&& fn) {
    for_each_face_on_axis(grid, 0, fn);
    for_each_face_on_axis(grid, 1, fn);
}

// rhs += d Δρ in flux form; boundary faces carry no flux.
void add_diffusion(const Grid& grid, double d, std::span<const double> rho,
                   std::span<double> rhs) {
    for_each_face(grid, [&](std::size_t a, std::size_t b, double h) {
        const double flux = d * (rho[b] - rho[a]) / (h * h);
        rhs[a] += flux;
        rhs[b] -= flux;
    });
}

// rhs −= ∇·(ρ χ(w) ∇w) with the donor-cell density at each face.
void add_chemotaxis(const Grid& grid, const SensitivitySpec& spec, Species s,
                    std::span<const double> rho, std::span<const double> w,
                    std::span<double> rhs) {
    for_each_face(grid, [&](std::size_t a, std::size_t b, double h) {
        const double velocity = face_chi(spec, s, w[a], w[b]) * (w[b] - w[a]) / h;
        const double flux = velocity * (velocity > 0.0 ? rho[a] : rho[b]) / h;
        rhs[a] -= flux;
        rhs[b] += flux;
    });
}

double dot(std::span<const double> x, std::span<const double> y) {
    std::vector<double> prod(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) prod[k] = x[k] * y[k];
    return pairwise_sum(prod);
}

// Solves (I − coeff·L) x = b by conjugate gradients, L the zero-flux Laplacian.
std::vector<double> solve_implicit_diffusion(const Grid& grid, double coeff,
                                             std::span<const double> b) {
    const std::size_t n = b.size();
    std::vector<double> x(b.begin(), b.end());
    auto apply = [&](std::span<const double> in, std::span<double> out) {
        std::copy(in.begin(), in.end(), out.begin());
        for_each_face(grid, [&](std::size_t a, std::size_t c, double h) {
            const double flux = coeff * (in[c] - in[a]) / (h * h);
            out[a] -= flux;
            out[c] += flux;
        });
    };

    std::vector<double> r(n), p(n), ap(n);
    apply(x, ap);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - ap[k];
    const double b_norm = std::sqrt(dot(b, b));
    double rr = dot(r, r);
    if (std::sqrt(rr) <= kCgRelativeResidual * b_norm) return x;
    p = r;
    for (std::size_t iter = 0; iter < 10 * n + 10; ++iter) {
        apply(p, ap);
        const double alpha = rr / dot(p, ap);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        const double rr_next = dot(r, r);
        if (std::sqrt(rr_next) <= kCgRelativeResidual * b_norm) break;
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    return x;
}

void check_values(const std::vector<double>& values, const char* name, std::size_t step_index) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]))
            throw SolverError(std::string("non-finite ") + name + " at cell " + std::to_string(k),
                              step_index);
        if (values[k] < -kNegativeTolerance)
            throw SolverError(std::string("negative ") + name + " at cell " + std::to_string(k),
                              step_index);
    }
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

Grid Grid::line(double lx, std::size_t nx) {
    if (!(lx > 0.0)) throw ConfigError("grid: lx must be positive");
    if (nx < 8) throw ConfigError("grid: at least 8 cells per direction");
    Grid g;
    g.dim = 1;
    g.lx = lx;
    g.nx = nx;
    g.ny = 1;
    g.hx = lx / static_cast<double>(nx);
    g.ly = 1.0;
    g.hy = 1.0;
    return g;
}

Grid Grid::rect(double lx, double ly, std::size_t nx, std::size_t ny) {
    if (!(lx > 0.0 && ly > 0.0)) throw ConfigError("grid: extents must be positive");
    if (nx < 8 || ny < 8) throw ConfigError("grid: at least 8 cells per direction");
    Grid g;
    g.dim = 2;
    g.lx = lx;
    g.ly = ly;
    g.nx = nx;
    g.ny = ny;
    g.hx = lx / static_cast<double>(nx);
    g.hy = ly / static_cast<double>(ny);
    return g;
}

FieldTriple FieldTriple::uniform(const Grid& grid, double u, double v, double w) {
    return FieldTriple{std::vector<double>(grid.cells(), u), std::vector<double>(grid.cells(), v),
                       std::vector<double>(grid.cells(), w)};
}

void check_shape(const FieldTriple& fields, const Grid& grid) {
    const std::size_t n = grid.cells();
    if (fields.u.size() != n || fields.v.size() != n || fields.w.size() != n)
        throw DomainError("fields do not match the grid");
    for (const auto* f : {&fields.u, &fields.v, &fields.w})
        for (double x : *f)
            if (!std::isfinite(x)) throw DomainError("fields contain non-finite values");
}

FieldTriple make_initial(const InitialData& init, const Grid& grid, const SteadyState& ss) {
    FieldTriple f = FieldTriple::uniform(grid, ss.u_star, ss.v_star, ss.w_star);
    switch (init.kind) {
        case InitialData::Kind::steady:
            return f;
        case InitialData::Kind::from_file:
            if (!init.fields) throw ConfigError("initial data: no fields supplied");
            check_shape(*init.fields, grid);
            f = *init.fields;
            break;
        case InitialData::Kind::perturbation: {
            const double pi = std::acos(-1.0);
            for (std::size_t j = 0; j < grid.ny; ++j)
                for (std::size_t i = 0; i < grid.nx; ++i) {
                    double shape = std::cos(init.modes_x * pi * grid.x(i) / grid.lx);
                    if (grid.dim == 2) shape *= std::cos(init.modes_y * pi * grid.y(j) / grid.ly);
                    const std::size_t k = grid.index(i, j);
                    f.u[k] = std::max(init.floor, ss.u_star * (1.0 + init.amplitude * shape));
                    f.v[k] = std::max(init.floor, ss.v_star * (1.0 - init.amplitude * shape));
                    f.w[k] = std::max(init.floor, ss.w_star * (1.0 + init.amplitude * shape));
                }
            break;
        }
        case InitialData::Kind::random: {
            std::mt19937_64 gen(init.seed);
            // 53 random bits mapped to [-1, 1); the raw engine output is portable.
            auto xi = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0; };
            for (std::size_t k = 0; k < grid.cells(); ++k) {
                f.u[k] = std::max(init.floor, ss.u_star * (1.0 + init.amplitude * xi()));
                f.v[k] = std::max(init.floor, ss.v_star * (1.0 + init.amplitude * xi()));
                f.w[k] = std::max(init.floor, ss.w_star * (1.0 + init.amplitude * xi()));
            }
            break;
        }
    }
    check_shape(f, grid);
    auto nonzero = [](const std::vector<double>& v) {
        return std::any_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
    };
    auto nonnegative = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
    };
    if (!nonnegative(f.u) || !nonnegative(f.v) || !nonnegative(f.w))
        throw ConfigError("initial data must be nonnegative");
    if (!nonzero(f.u) || !nonzero(f.v))
        throw ConfigError("initial u and v must not vanish identically");
    return f;
}

CflBound cfl_bound(const ModelParams& p, const SensitivitySpec& spec, const Grid& grid,
                   const FieldTriple& fields, Scheme scheme, double cfl_safety) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const double dmax = std::max({p.d1, p.d2, p.d3});
    double inv_h2 = 1.0 / (grid.hx * grid.hx);
    if (grid.dim == 2) inv_h2 += 1.0 / (grid.hy * grid.hy);
    const double diffusive_rate = scheme == Scheme::imex ? 0.0 : 2.0 * dmax * inv_h2;

    // A cell can lose mass through both faces on each axis.
    double advective_rate = 0.0;
    for (int axis = 0; axis < grid.dim; ++axis) {
        double vmax = 0.0;
        for (Species s : {Species::u, Species::v})
            for_each_face_on_axis(grid, axis, [&](std::size_t a, std::size_t b, double h) {
                const double chi = face_chi(spec, s, fields.w[a], fields.w[b]);
                vmax = std::max(vmax, std::abs(chi * (fields.w[b] - fields.w[a]) / h));
            });
        advective_rate += 2.0 * vmax / (axis == 0 ? grid.hx : grid.hy);
    }

    const double uv = 1.0 + max_of(fields.u) + max_of(fields.v);
    const double kinetic_rate = std::max({p.mu1 * uv, p.mu2 * uv, p.gamma});

    CflBound out;
    out.diffusive = diffusive_rate > 0.0 ? 1.0 / diffusive_rate : kInf;
    out.advective = advective_rate > 0.0 ? 1.0 / advective_rate : kInf;
    out.kinetic = kinetic_rate > 0.0 ? 1.0 / kinetic_rate : kInf;
    const double total = diffusive_rate + advective_rate + kinetic_rate;
    out.dt_max = total > 0.0 ? cfl_safety / total : kInf;
    if (diffusive_rate >= advective_rate && diffusive_rate >= kinetic_rate)
        out.limiting = CflBound::Limit::diffusive;
    else if (advective_rate >= kinetic_rate)
        out.limiting = CflBound::Limit::advective;
    else
        out.limiting = CflBound::Limit::kinetic;
    return out;
}

namespace {

// Kahan update x + d, keeping the rounding error in c for the next step. Without it,
// increments below half an ulp of x are lost and fields stall near equilibrium.
void compensated_add(const std::vector<double>& x, const std::vector<double>& d,
                     std::vector<double>& c, std::vector<double>& out) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double y = d[k] + c[k];
        const double t = x[k] + y;
        c[k] = y - (t - x[k]);
        out[k] = t;
    }
}

}  // namespace

FieldTriple step(const FieldTriple& fields, const ModelParams& p, const SensitivitySpec& spec,
                 const Grid& grid, Scheme scheme, double dt, std::size_t step_index,
                 FieldTriple* carry) {
    const std::size_t n = grid.cells();
    const auto& u = fields.u;
    const auto& v = fields.v;
    const auto& w = fields.w;

    std::vector<double> ru(n, 0.0), rv(n, 0.0), rw(n, 0.0);
    add_chemotaxis(grid, spec, Species::u, u, w, ru);
    add_chemotaxis(grid, spec, Species::v, v, w, rv);
    for (std::size_t k = 0; k < n; ++k) {
        ru[k] += p.mu1 * u[k] * (1.0 - u[k] - p.a1 * v[k]);
        rv[k] += p.mu2 * v[k] * (1.0 - p.a2 * u[k] - v[k]);
        rw[k] += p.alpha * u[k] + p.beta * v[k] - p.gamma * w[k];
    }
    add_diffusion(grid, p.d1, u, ru);
    add_diffusion(grid, p.d2, v, rv);
    add_diffusion(grid, p.d3, w, rw);
    for (std::size_t k = 0; k < n; ++k) {
        ru[k] *= dt;
        rv[k] *= dt;
        rw[k] *= dt;
    }
    // Implicit diffusion written for the increment: (I - dt d L) delta = dt (L u + rest).
    if (scheme == Scheme::imex) {
        ru = solve_implicit_diffusion(grid, dt * p.d1, ru);
        rv = solve_implicit_diffusion(grid, dt * p.d2, rv);
        rw = solve_implicit_diffusion(grid, dt * p.d3, rw);
    }

    FieldTriple next{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    if (carry) {
        if (carry->u.size() != n || carry->v.size() != n || carry->w.size() != n)
            *carry = FieldTriple::uniform(grid, 0.0, 0.0, 0.0);
        compensated_add(u, ru, carry->u, next.u);
        compensated_add(v, rv, carry->v, next.v);
        compensated_add(w, rw, carry->w, next.w);
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            next.u[k] = u[k] + ru[k];
            next.v[k] = v[k] + rv[k];
            next.w[k] = w[k] + rw[k];
        }
    }

    check_values(next.u, "u", step_index);
    check_values(next.v, "v", step_index);
    check_values(next.w, "w", step_index);
    return next;
}

FieldTriple step(const FieldTriple& fields, const ModelParams& p, const SensitivitySpec& spec,
                 const Grid& grid, const SolverConfig& cfg) {
    return step(fields, p, spec, grid, cfg.scheme, cfg.dt);
}

double grad_squared_integral(const Grid& grid, std::span<const double> w) {
    auto derivative = [](std::size_t count, std::size_t i, double h, auto&& at) {
        if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        if (i + 1 == count)
            return (3.0 * at(count - 1) - 4.0 * at(count - 2) + at(count - 3)) / (2.0 * h);
        return (at(i + 1) - at(i - 1)) / (2.0 * h);
    };

    std::vector<double> density(grid.cells());
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double gx = derivative(grid.nx, i, grid.hx,
                                         [&](std::size_t k) { return w[grid.index(k, j)]; });
            double g2 = gx * gx;
            if (grid.dim == 2) {
                const double gy = derivative(grid.ny, j, grid.hy,
                                             [&](std::size_t k) { return w[grid.index(i, k)]; });
                g2 += gy * gy;
            }
            density[grid.index(i, j)] = g2;
        }
    return pairwise_sum(density) * grid.cell_measure();
}

Diagnostics diagnose(const FieldTriple& fields, const Grid& grid, const SteadyState& ss,
                     double time) {
    Diagnostics d;
    d.time = time;
    auto summarize = [](const std::vector<double>& f, double star, double& dist, double& lo,
                        double& hi) {
        dist = 0.0;
        lo = f.front();
        hi = f.front();
        for (double x : f) {
            dist = std::max(dist, std::abs(x - star));
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    };
    summarize(fields.u, ss.u_star, d.du_inf, d.min_u, d.max_u);
    summarize(fields.v, ss.v_star, d.dv_inf, d.min_v, d.max_v);
    summarize(fields.w, ss.w_star, d.dw_inf, d.min_w, d.max_w);
    d.mass_u = pairwise_sum(fields.u) * grid.cell_measure();
    d.mass_v = pairwise_sum(fields.v) * grid.cell_measure();
    d.mass_w = pairwise_sum(fields.w) * grid.cell_measure();
    d.grad_w2 = grad_squared_integral(grid, fields.w);
    return d;
}

RunResult run(const ModelParams& p, const SensitivitySpec& spec, const Grid& grid,
              const SolverConfig& cfg, const FieldTriple& initial,
              const SnapshotObserver& observer) {
    if (!(cfg.dt > 0.0)) throw ConfigError("solver: dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw ConfigError("solver: t_end must be nonnegative");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
        throw ConfigError("solver: cfl_safety must lie in (0,1]");
    check_shape(initial, grid);
    const SteadyState ss = steady_state(p);

    RunResult result;
    FieldTriple fields = initial;
    FieldTriple carry = FieldTriple::uniform(grid, 0.0, 0.0, 0.0);
    double t = 0.0;
    std::size_t snapshots = 0;
    std::size_t last_recorded = 0;
    auto record = [&] {
        const Diagnostics d = diagnose(fields, grid, ss, t);
        if (observer) observer(snapshots, t, fields, d);
        result.diagnostics.push_back(d);
        ++snapshots;
        last_recorded = result.steps;
    };

    record();
    const double stop_tol = 1e-12 * std::max(1.0, cfg.t_end);
    while (cfg.t_end - t > stop_tol) {
        double dt = std::min(cfg.dt, cfg.t_end - t);
        dt = std::min(dt, cfl_bound(p, spec, grid, fields, cfg.scheme, cfg.cfl_safety).dt_max);
        fields = step(fields, p, spec, grid, cfg.scheme, dt, result.steps + 1, &carry);
        t += dt;
        ++result.steps;
        if (cfg.snapshot_every > 0 && result.steps % cfg.snapshot_every == 0) record();
    }
    if (last_recorded != result.steps) record();

    result.final_fields = std::move(fields);
    result.final_time = t;
    return result;
}

RunResult run(const ModelParams& p, const SensitivitySpec& spec, const Grid& grid,
              const SolverConfig& cfg, const InitialData& init,
              const SnapshotObserver& observer) {
    return run(p, spec, grid, cfg, make_initial(init, grid, steady_state(p)), observer);
}

std::string to_string(Scheme s) {
    return s == Scheme::imex ? "imex" : "explicit-euler";
}

std::string to_string(CflBound::Limit l) {
    switch (l) {
        case CflBound::Limit::diffusive: return "diffusive";
        case CflBound::Limit::advective: return "advective";
        case CflBound::Limit::kinetic: return "kinetic";
    }
    return "diffusive";
}

}  // namespace chemostab

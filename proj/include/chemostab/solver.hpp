#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemostab/model.hpp"

namespace chemostab {

/// Uniform cell-centered grid on [0, lx] (1D) or [0, lx] × [0, ly] (2D).
struct Grid {
    int dim = 1;
    double lx = 1.0, ly = 1.0;
    std::size_t nx = 8, ny = 1;
    double hx = 0.125, hy = 1.0;

    static Grid line(double lx, std::size_t nx);
    static Grid rect(double lx, double ly, std::size_t nx, std::size_t ny);

    std::size_t cells() const { return nx * ny; }
    double cell_measure() const { return dim == 1 ? hx : hx * hy; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    double x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * hx; }
    double y(std::size_t j) const { return (static_cast<double>(j) + 0.5) * hy; }
};

/// Cell-centered (u, v, w), row-major with x fastest.
struct FieldTriple {
    std::vector<double> u, v, w;

    static FieldTriple uniform(const Grid& grid, double u, double v, double w);
};

/// Throws DomainError when shapes mismatch the grid or entries are not finite.
void check_shape(const FieldTriple& fields, const Grid& grid);

enum class Scheme {
    explicit_euler,
    /// Implicit diffusion, explicit chemotaxis and kinetics.
    imex,
};

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::explicit_euler;
    double cfl_safety = 0.9;
    std::size_t snapshot_every = 100;
    std::uint64_t seed = 1;
};

struct InitialData {
    enum class Kind { steady, perturbation, random, from_file };

    Kind kind = Kind::random;
    /// Relative to the steady state: u0 = u*(1 + amplitude·ξ).
    double amplitude = 0.1;
    int modes_x = 1, modes_y = 1;
    std::uint64_t seed = 1;
    double floor = 1e-6;
    /// Used by Kind::from_file.
    std::optional<FieldTriple> fields;
};

FieldTriple make_initial(const InitialData& init, const Grid& grid, const SteadyState& ss);

struct CflBound {
    /// h²/(2·n_dim·max d) on a square grid; +inf for the IMEX scheme.
    double diffusive = 0.0;
    /// Inverse of the total outflow rate Σ 2·max|χ(w)∇w|/h.
    double advective = 0.0;
    /// 1 / max(μi (1 + max u + max v), γ).
    double kinetic = 0.0;
    /// cfl_safety / (1/diffusive + 1/advective + 1/kinetic).
    double dt_max = 0.0;
    enum class Limit { diffusive, advective, kinetic } limiting = Limit::diffusive;
};

CflBound cfl_bound(const ModelParams& p, const SensitivitySpec& spec, const Grid& grid,
                   const FieldTriple& fields, Scheme scheme, double cfl_safety);

/// Advances one step of size dt. Throws SolverError on a non-finite or
/// negative value, reporting `step_index`. When `carry` is given the update is
/// compensated and `carry` holds the rounding error between calls (zeroed if
/// its shape does not match).
FieldTriple step(const FieldTriple& fields, const ModelParams& p, const SensitivitySpec& spec,
                 const Grid& grid, Scheme scheme, double dt, std::size_t step_index = 0,
                 FieldTriple* carry = nullptr);

/// step() with cfg.scheme and cfg.dt.
FieldTriple step(const FieldTriple& fields, const ModelParams& p, const SensitivitySpec& spec,
                 const Grid& grid, const SolverConfig& cfg);

/// ∫|∇w|² with centered differences inside and one-sided second-order
/// differences in the boundary cells.
double grad_squared_integral(const Grid& grid, std::span<const double> w);

struct Diagnostics {
    double time = 0.0;
    double du_inf = 0.0, dv_inf = 0.0, dw_inf = 0.0;
    double min_u = 0.0, min_v = 0.0, min_w = 0.0;
    double max_u = 0.0, max_v = 0.0, max_w = 0.0;
    double mass_u = 0.0, mass_v = 0.0, mass_w = 0.0;
    double grad_w2 = 0.0;
};

Diagnostics diagnose(const FieldTriple& fields, const Grid& grid, const SteadyState& ss,
                     double time);

/// Called with the snapshot index, time, fields and their diagnostics.
using SnapshotObserver =
    std::function<void(std::size_t, double, const FieldTriple&, const Diagnostics&)>;

struct RunResult {
    std::vector<Diagnostics> diagnostics;
    FieldTriple final_fields;
    std::size_t steps = 0;
    double final_time = 0.0;
};

/// Integrates to cfg.t_end with dt = min(cfg.dt, cfl_bound) per step, recording
/// a snapshot at t = 0, every cfg.snapshot_every steps and at the end.
RunResult run(const ModelParams& p, const SensitivitySpec& spec, const Grid& grid,
              const SolverConfig& cfg, const FieldTriple& initial,
              const SnapshotObserver& observer = {});

RunResult run(const ModelParams& p, const SensitivitySpec& spec, const Grid& grid,
              const SolverConfig& cfg, const InitialData& init,
              const SnapshotObserver& observer = {});

std::string to_string(Scheme s);
std::string to_string(CflBound::Limit l);

}  // namespace chemostab

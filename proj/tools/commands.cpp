#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chemostab/config.hpp"
#include "chemostab/error.hpp"
#include "chemostab/io.hpp"
#include "chemostab/lyapunov.hpp"
#include "chemostab/numeric.hpp"
#include "chemostab/rate.hpp"
#include "chemostab/region.hpp"

namespace chemostab::cli {

namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Writes manifest.json before any other artifact and again, with the wall
// time, once the command finishes.
class Manifest {
public:
    Manifest(std::string command, const Options& opt, std::uint64_t config_hash)
        : start_(std::chrono::steady_clock::now()) {
        doc_["command"] = std::move(command);
        doc_["config"] = opt.config.string();
        doc_["config_hash"] = hex64(config_hash);
        doc_["output_dir"] = opt.out ? opt.out->string() : "";
        doc_["tool_version"] = kToolVersion;
        doc_["wall_time_seconds"] = nullptr;
        if (opt.out) {
            path_ = *opt.out / "manifest.json";
            fs::create_directories(*opt.out);
            write();
        }
    }

    void finish(int exit_code) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
        doc_["wall_time_seconds"] = elapsed.count();
        doc_["exit_code"] = exit_code;
        if (path_) write();
    }

private:
    void write() const {
        std::ofstream out(*path_, std::ios::binary);
        out << doc_.dump(2) << '\n';
    }

    nlohmann::json doc_;
    std::optional<fs::path> path_;
    std::chrono::steady_clock::time_point start_;
};

struct Loaded {
    KeyValueConfig cfg;
    ModelConfig model;
};

Loaded load(const Options& opt) {
    if (opt.config.empty()) throw ConfigError("--config is required");
    Loaded l{KeyValueConfig::load(opt.config), {}};
    l.model = load_model(l.cfg);
    return l;
}

fs::path base_dir(const Options& opt) {
    const fs::path parent = opt.config.parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Runs `body` with the common error-to-exit-code mapping and manifest handling.
int guarded(const std::string& name, const Options& opt, std::ostream& err,
            const std::function<int(Manifest*)>& body) {
    std::optional<Manifest> manifest;
    int code = kOk;
    try {
        std::uint64_t hash = 0;
        if (!opt.config.empty() && fs::exists(opt.config))
            hash = KeyValueConfig::load(opt.config).hash();
        manifest.emplace(name, opt, hash);
        code = body(&*manifest);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        code = kUsage;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        code = kFailure;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        code = kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kFailure;
    }
    if (manifest) manifest->finish(code);
    return code;
}

void print_membership(std::ostream& out, const char* name, const Membership& m) {
    out << std::left << std::setw(14) << name << " inside=" << yes_no(m.inside)
        << " margin=" << format_double(m.margin) << " q=" << format_double(m.q) << '\n';
}

}  // namespace

int cmd_check(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded("check", opt, err, [&](Manifest*) {
        const Loaded l = load(opt);
        const ModelParams& p = l.model.params;
        const RegionParams rp = RegionParams::from(p);
        const SteadyState ss = steady_state(p);
        const RegionPoint pt = point_from_params(p);

        out << "steady state   u*=" << format_double(ss.u_star) << " v*=" << format_double(ss.v_star)
            << " w*=" << format_double(ss.w_star) << '\n';
        out << "M1=" << format_double(p.M1) << " M2=" << format_double(p.M2) << '\n';
        out << "point          s=" << format_double(pt.s) << " t=" << format_double(pt.t) << '\n';
        const Membership bw = in_region_bw(rp, pt);
        const Membership miz = in_region_miz(rp, pt);
        const Membership nw = in_region_new(rp, pt);
        print_membership(out, "bai-winkler", bw);
        print_membership(out, "mizukami", miz);
        print_membership(out, "new", nw);
        out << "closed-form    inside=" << yes_no(closed_form_membership(rp, pt)) << '\n';

        int dim = 1;
        if (l.cfg.integer_or("ny", 0) > 0) dim = 2;
        const int n = std::max(2, dim);
        if (l.model.sensitivity.kind() == SensitivitySpec::Kind::constant) {
            const auto& chi = l.model.sensitivity.coefficients();
            if (chi[0] > 0.0 && chi[1] > 0.0) {
                const Theorem12Report t12 = check_theorem12(p, chi[0], chi[1], n, true);
                out << "constant-chi   n=" << n << " verdict=" << to_string(t12.verdict)
                    << " slack=";
                for (std::size_t k = 0; k < 4; ++k)
                    out << (k ? "," : "") << format_double(t12.slack[k]);
                out << '\n';
            } else {
                out << "constant-chi   n/a (needs chi1, chi2 > 0)\n";
            }
        }
        if (l.model.sensitivity.kind() != SensitivitySpec::Kind::constant) {
            const std::vector<double> grid = default_sample_grid();
            double c_chi = 0.0;
            for (double w : grid)
                c_chi = std::max({c_chi, w * l.model.sensitivity.chi(Species::u, w),
                                  w * l.model.sensitivity.chi(Species::v, w)});
            const Theorem13Report t13 =
                check_theorem13(l.model.sensitivity, p, n, 0.5, n + 1e-6, c_chi, grid);
            out << "signal-chi     " << (t13.satisfied_on_grid ? "satisfied-on-grid" : "violated")
                << " C_chi=" << format_double(c_chi);
            if (t13.first_violation)
                out << " first_violation_w=" << format_double(t13.first_violation->w) << " species="
                    << (t13.first_violation->species == Species::u ? "u" : "v");
            out << '\n';
        }

        if (!nw.inside) {
            out << "verdict        outside the stability region\n";
            return static_cast<int>(kFailure);
        }
        const Witness w = select_q_delta(p);
        const DissipationConstants dc = dissipation_constants(p, w);
        out << "witness        q=" << format_double(w.q) << " delta=" << format_double(w.delta)
            << " delta_interval=(" << format_double(w.delta_lo) << ","
            << format_double(w.delta_hi) << ")\n";
        out << "dissipation    eps1=" << format_double(dc.eps1) << " eps2="
            << format_double(dc.eps2) << " eps=" << format_double(dc.eps) << '\n';
        out << "verdict        inside the stability region\n";
        return static_cast<int>(kOk);
    });
}

int cmd_atlas(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded("atlas", opt, err, [&](Manifest*) {
        const Loaded l = load(opt);
        const RegionParams rp = RegionParams::from(l.model.params);
        const auto [s0, s1, t0, t1] = opt.rect;
        if (opt.res < 0) throw ConfigError("--res must be nonnegative");

        std::ostringstream csv;
        csv << "s,t,in_bw,in_miz,in_new,in_closed_form,margin\n";
        const bool empty = opt.res == 0 || s1 < s0 || t1 < t0;
        if (!empty) {
            const int n = opt.res;
            auto coord = [n](double lo, double hi, int k) {
                return n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
            };
            // Mizukami's bound does not depend on the point.
            const double q0 = q0_maximizer(rp);
            const double miz_bound = f_of_q(rp, q0) / (1.0 + q0);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const RegionPoint pt{coord(s0, s1, i), coord(t0, t1, j)};
                    const Membership nw = in_region_new(rp, pt);
                    const bool valid = pt.s >= 0.0 && pt.t >= 0.0;
                    const bool miz =
                        valid && miz_bound - std::max(pt.s, pt.t) > kBoundaryMargin;
                    csv << format_double(pt.s) << ',' << format_double(pt.t) << ','
                        << in_region_bw(rp, pt).inside << ',' << miz << ',' << nw.inside << ','
                        << closed_form_membership(rp, pt) << ',' << format_double(nw.margin)
                        << '\n';
                }
        }
        if (opt.out) {
            std::ofstream file(*opt.out / "atlas.csv", std::ios::binary);
            file << csv.str();
        } else {
            out << csv.str();
        }
        return static_cast<int>(kOk);
    });
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded("simulate", opt, err, [&](Manifest*) {
        if (!opt.out) throw ConfigError("simulate needs --out DIR");
        const Loaded l = load(opt);
        const SolverSetup setup = load_solver(l.cfg, base_dir(opt));
        const ModelParams& p = l.model.params;
        const fs::path snap_dir = *opt.out / "snapshots";
        fs::create_directories(snap_dir);

        std::ofstream index(snap_dir / "index.csv", std::ios::binary);
        index << "index,time\n";
        std::ofstream diag(*opt.out / "diagnostics.csv", std::ios::binary);
        diag << kDiagnosticsHeader << '\n';

        const auto observer = [&](std::size_t k, double t, const FieldTriple& f,
                                  const Diagnostics& d) {
            char stem[32];
            std::snprintf(stem, sizeof stem, "snap_%06zu", k);
            write_field_csv(snap_dir / (std::string(stem) + "_u.csv"), setup.grid, f.u);
            write_field_csv(snap_dir / (std::string(stem) + "_v.csv"), setup.grid, f.v);
            write_field_csv(snap_dir / (std::string(stem) + "_w.csv"), setup.grid, f.w);
            index << k << ',' << format_double(t) << '\n';
            diag << diagnostics_row(d) << '\n';
        };

        const RunResult result =
            run(p, l.model.sensitivity, setup.grid, setup.solver, setup.init, observer);
        write_field_csv(*opt.out / "u.csv", setup.grid, result.final_fields.u);
        write_field_csv(*opt.out / "v.csv", setup.grid, result.final_fields.v);
        write_field_csv(*opt.out / "w.csv", setup.grid, result.final_fields.w);

        const Diagnostics& last = result.diagnostics.back();
        out << "steps=" << result.steps << " snapshots=" << result.diagnostics.size()
            << " t=" << format_double(result.final_time) << '\n';
        out << "final sup distances u=" << format_double(last.du_inf)
            << " v=" << format_double(last.dv_inf) << " w=" << format_double(last.dw_inf) << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_energy(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded("energy", opt, err, [&](Manifest*) {
        if (!opt.out) throw ConfigError("energy needs --out DIR of a previous simulation");
        const fs::path snap_dir = *opt.out / "snapshots";
        if (!fs::exists(snap_dir / "index.csv"))
            throw ConfigError("no simulation output in " + opt.out->string());
        const Loaded l = load(opt);
        const SolverSetup setup = load_solver(l.cfg, base_dir(opt));
        const ModelParams& p = l.model.params;
        const SteadyState ss = steady_state(p);
        const Witness witness = select_q_delta(p);
        const DissipationConstants dc = dissipation_constants(p, witness);

        std::ifstream index(snap_dir / "index.csv");
        std::string line;
        std::getline(index, line);
        std::vector<EnergyRecord> records;
        while (std::getline(index, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv_line(line);
            if (cells.size() != 2) throw ConfigError("malformed snapshots/index.csv");
            char stem[32];
            std::snprintf(stem, sizeof stem, "snap_%06zu",
                          static_cast<std::size_t>(std::stoull(cells[0])));
            const FieldTriple f{
                read_field_csv(snap_dir / (std::string(stem) + "_u.csv"), setup.grid),
                read_field_csv(snap_dir / (std::string(stem) + "_v.csv"), setup.grid),
                read_field_csv(snap_dir / (std::string(stem) + "_w.csv"), setup.grid)};
            records.push_back(energy(f, setup.grid, ss, witness, p, std::stod(cells[1])));
        }
        attach_energy_rates(records);

        std::ofstream csv(*opt.out / "energy.csv", std::ios::binary);
        csv << kEnergyHeader << '\n';
        for (const EnergyRecord& r : records) csv << energy_row(r) << '\n';

        out << "witness q=" << format_double(witness.q) << " delta=" << format_double(witness.delta)
            << " eps1=" << format_double(dc.eps1) << " eps2=" << format_double(dc.eps2) << '\n';
        if (records.size() >= 3) {
            const DecayReport report = verify_decay(records, dc, opt.slack);
            out << "decay fraction_satisfied=" << format_double(report.fraction_satisfied)
                << " worst_violation=" << format_double(report.worst_violation)
                << " checked=" << report.checked << '\n';
        } else {
            out << "decay not checked (fewer than 3 snapshots)\n";
        }
        return static_cast<int>(kOk);
    });
}

int cmd_rate(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded("rate", opt, err, [&](Manifest*) {
        if (!opt.out) throw ConfigError("rate needs --out DIR of a previous simulation");
        const fs::path diag_path = *opt.out / "diagnostics.csv";
        if (!fs::exists(diag_path))
            throw ConfigError("no diagnostics.csv in " + opt.out->string());
        const std::vector<Diagnostics> diags = read_diagnostics_csv(diag_path);
        const auto certs = certify(diags, opt.min_rate, opt.window[0], opt.window[1]);

        std::ofstream csv(*opt.out / "rate.csv", std::ios::binary);
        csv << "field,ell,C,r2,t_start,t_end\n";
        for (const Certification& c : certs) {
            if (c.estimate) {
                const RateEstimate& e = *c.estimate;
                csv << c.field << ',' << format_double(e.ell) << ',' << format_double(e.C) << ','
                    << format_double(e.r2) << ',' << format_double(e.t_start) << ','
                    << format_double(e.t_end) << '\n';
            } else {
                csv << c.field << ",nan,nan,nan,nan,nan\n";
            }
            out << c.field << ": " << to_string(c.status);
            if (c.estimate)
                out << " ell=" << format_double(c.estimate->ell)
                    << " r2=" << format_double(c.estimate->r2);
            out << '\n';
        }
        return static_cast<int>(kOk);
    });
}

int cmd_compare_regions(const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded("compare-regions", opt, err, [&](Manifest*) {
        const Loaded l = load(opt);
        const RegionParams rp = RegionParams::from(l.model.params);
        const AxisWitnesses aw = axis_witnesses(rp);
        const DerivativeReport dr = derivative_checks(rp);
        const double f1 = f_of_q(rp, 1.0);

        out << "case           " << to_string(classify_inclusion_case(rp)) << '\n';
        out << "f(1)=g(1)      " << format_double(f1) << '\n';
        out << "df/dq(1)=" << format_double(dr.df_at_1) << " dg/dq(1)=" << format_double(dr.dg_at_1)
            << " finite-difference-consistent=" << yes_no(dr.consistent) << '\n';
        out << "max f          q=" << format_double(aw.q_f) << " f=" << format_double(aw.f_max)
            << '\n';
        out << "max g          q=" << format_double(aw.q_g) << " g=" << format_double(aw.g_max)
            << '\n';
        auto show = [&](const char* name, const std::optional<RegionPoint>& pt) {
            out << std::left << std::setw(15) << name;
            if (!pt) {
                out << "none (q=1 is optimal on this axis)\n";
                return;
            }
            out << "s=" << format_double(pt->s) << " t=" << format_double(pt->t)
                << " in_new=" << yes_no(in_region_new(rp, *pt).inside)
                << " in_bw=" << yes_no(in_region_bw(rp, *pt).inside) << '\n';
        };
        show("s-axis witness", aw.s_axis);
        show("t-axis witness", aw.t_axis);
        const RegionPoint w = strict_inclusion_witness(rp);
        out << "witness        s=" << format_double(w.s) << " t=" << format_double(w.t) << '\n';
        return static_cast<int>(kOk);
    });
}

int run_command(const std::string& command, const Options& opt, std::ostream& out,
                std::ostream& err) {
    if (command == "check") return cmd_check(opt, out, err);
    if (command == "atlas") return cmd_atlas(opt, out, err);
    if (command == "simulate") return cmd_simulate(opt, out, err);
    if (command == "energy") return cmd_energy(opt, out, err);
    if (command == "rate") return cmd_rate(opt, out, err);
    if (command == "compare-regions") return cmd_compare_regions(opt, out, err);
    err << "unknown command '" << command << "'\n";
    return kUsage;
}

}  // namespace chemostab::cli

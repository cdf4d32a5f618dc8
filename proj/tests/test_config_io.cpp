#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chemostab/config.hpp"
#include "chemostab/error.hpp"
#include "chemostab/io.hpp"

using namespace chemostab;
namespace fs = std::filesystem;

namespace {

const char* kModel = R"(# comment line
d1 = 1
d2 = 2
d3 = 3
mu1 = 4   # trailing comment
mu2 = 5
a1 = 0.5
a2 = 0.25
alpha = 1
beta = 2
gamma = 3
chi_kind = constant
chi1 = 0.1
chi2 = 0.2
)";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("chemostab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("key-value parsing") {
    const KeyValueConfig c = KeyValueConfig::parse(kModel);
    CHECK(c.number("d2") == 2.0);
    CHECK(c.number("mu1") == 4.0);
    CHECK(c.text_or("chi_kind", "") == "constant");
    CHECK(c.number_or("M1", 7.0) == 7.0);
    CHECK(c.integer_or("nx", 128) == 128);
    CHECK_THROWS_AS(c.number("M1"), ConfigError);

    CHECK_THROWS_AS(KeyValueConfig::parse("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("d1 = 1\nd1 = 2\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("d1 =\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("d1 1\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("d1 = abc\n").number("d1"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("nx = 1.5\n").integer_or("nx", 0), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("config hash follows the text") {
    const auto a = KeyValueConfig::parse(kModel);
    const auto b = KeyValueConfig::parse(kModel);
    CHECK(a.hash() == b.hash());
    CHECK(KeyValueConfig::parse(std::string(kModel) + "M1 = 1\n").hash() != a.hash());
}

TEST_CASE("model config") {
    const ModelConfig m = load_model(KeyValueConfig::parse(kModel));
    CHECK(m.params.d3 == 3.0);
    CHECK(m.params.a2 == 0.25);
    CHECK(m.sensitivity.kind() == SensitivitySpec::Kind::constant);
    // M defaults to the constant sensitivities.
    CHECK(m.params.M1 == doctest::Approx(0.1));
    CHECK(m.params.M2 == doctest::Approx(0.2));

    const ModelConfig r = load_model(KeyValueConfig::parse(
        "d1=1\nd2=1\nd3=1\nmu1=1\nmu2=1\na1=0.5\na2=0.5\nalpha=1\nbeta=1\ngamma=1\n"
        "chi_kind=reciprocal\nK1=0.5\nK2=0.25\nM1=3\n"));
    CHECK(r.sensitivity.kind() == SensitivitySpec::Kind::reciprocal);
    CHECK(r.params.M1 == 3.0);
    CHECK(r.params.M2 == doctest::Approx(250.0));

    CHECK_THROWS_AS(load_model(KeyValueConfig::parse(std::string(kModel) + "M1 = 0.05\n")),
                    ConfigError);
    std::string bad = kModel;
    bad.replace(bad.find("a1 = 0.5"), 8, "a1 = 1.5");
    CHECK_THROWS_AS(load_model(KeyValueConfig::parse(bad)), ConfigError);
    std::string kind = kModel;
    kind.replace(kind.find("constant"), 8, "magic");
    CHECK_THROWS_AS(load_model(KeyValueConfig::parse(kind)), ConfigError);
}

TEST_CASE("solver config") {
    const SolverSetup d = load_solver(KeyValueConfig::parse(""));
    CHECK(d.grid.dim == 1);
    CHECK(d.grid.nx == 128);
    CHECK(d.solver.scheme == Scheme::explicit_euler);
    CHECK(d.init.kind == InitialData::Kind::random);
    CHECK(d.init.amplitude == 0.1);

    const SolverSetup s = load_solver(KeyValueConfig::parse(
        "nx = 16\nny = 24\nlx = 2\nly = 3\ndt = 0.01\nt_end = 5\nscheme = imex\n"
        "cfl_safety = 0.5\nsnapshot_every = 7\ninit_kind = perturbation\n"
        "init_amplitude = 0.2\nseed = 42\n"));
    CHECK(s.grid.dim == 2);
    CHECK(s.grid.ny == 24);
    CHECK(s.grid.hy == doctest::Approx(0.125));
    CHECK(s.solver.dt == 0.01);
    CHECK(s.solver.scheme == Scheme::imex);
    CHECK(s.solver.cfl_safety == 0.5);
    CHECK(s.solver.snapshot_every == 7);
    CHECK(s.init.kind == InitialData::Kind::perturbation);
    CHECK(s.init.seed == 42);

    CHECK_THROWS_AS(load_solver(KeyValueConfig::parse("scheme = rk4\n")), ConfigError);
    CHECK_THROWS_AS(load_solver(KeyValueConfig::parse("nx = 4\n")), ConfigError);
    CHECK_THROWS_AS(load_solver(KeyValueConfig::parse("dt = -1\n")), ConfigError);
    CHECK_THROWS_AS(load_solver(KeyValueConfig::parse("cfl_safety = 1.5\n")), ConfigError);
    CHECK_THROWS_AS(load_solver(KeyValueConfig::parse("init_kind = file\n")), ConfigError);
}

TEST_CASE("field csv round trip and file initial data") {
    const fs::path dir = scratch("fields");
    const Grid g = Grid::rect(1.0, 2.0, 8, 9);
    std::vector<double> u(g.cells()), v(g.cells()), w(g.cells());
    for (std::size_t k = 0; k < g.cells(); ++k) {
        u[k] = 1.0 / (k + 1.0);
        v[k] = std::sqrt(k + 2.0);
        w[k] = 0.1 * k;
    }
    write_field_csv(dir / "u.csv", g, u);
    write_field_csv(dir / "v.csv", g, v);
    write_field_csv(dir / "w.csv", g, w);
    CHECK(read_field_csv(dir / "u.csv", g) == u);

    std::ifstream in(dir / "u.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,value");

    CHECK_THROWS_AS(read_field_csv(dir / "u.csv", Grid::rect(1.0, 2.0, 8, 8)), ConfigError);

    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "nx = 8\nny = 9\nly = 2\ninit_kind = file\ninit_file = .\n";
    const SolverSetup s = load_solver(KeyValueConfig::load(cfg), dir);
    REQUIRE(s.init.fields);
    CHECK(s.init.fields->v == v);
    CHECK(s.init.fields->w == w);
}

TEST_CASE("diagnostics csv round trip") {
    const fs::path dir = scratch("diag");
    std::vector<Diagnostics> rows(3);
    for (int k = 0; k < 3; ++k) {
        rows[k].time = 0.1 * k;
        rows[k].du_inf = 1.0 / 3.0 + k;
        rows[k].mass_w = 1e-300 * k;
        rows[k].grad_w2 = 2.0 / 7.0;
    }
    write_diagnostics_csv(dir / "d.csv", rows);
    const auto back = read_diagnostics_csv(dir / "d.csv");
    REQUIRE(back.size() == 3);
    CHECK(back[2].time == rows[2].time);
    CHECK(back[1].du_inf == rows[1].du_inf);
    CHECK(back[2].mass_w == rows[2].mass_w);
    CHECK(back[0].grad_w2 == rows[0].grad_w2);

    std::ofstream(dir / "bad.csv") << "time,du\n0,1\n";
    CHECK_THROWS_AS(read_diagnostics_csv(dir / "bad.csv"), ConfigError);
}

TEST_CASE("energy rows") {
    EnergyRecord r;
    r.time = 1.5;
    r.E = 0.25;
    const std::string row = energy_row(r);
    CHECK(split_csv_line(row).size() == 10);
    CHECK(row.back() == ',');
    r.E_rate = -0.5;
    CHECK(split_csv_line(energy_row(r)).back() == "-0.5");
    CHECK(split_csv_line(kEnergyHeader).size() == 10);
    CHECK(split_csv_line("a,,b").size() == 3);
}

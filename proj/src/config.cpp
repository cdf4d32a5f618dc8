#include "chemostab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "chemostab/error.hpp"
#include "chemostab/io.hpp"

namespace chemostab {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "d1", "d2", "d3", "mu1", "mu2", "a1", "a2", "alpha", "beta", "gamma", "chi_kind", "chi1",
        "chi2", "K1", "K2", "M1", "M2",
        // solver
        "nx", "ny", "lx", "ly", "dt", "t_end", "scheme", "cfl_safety", "snapshot_every",
        "init_kind", "init_amplitude", "seed", "init_file"};
    return keys;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig cfg;
    cfg.hash_ = fnv1a(text);
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (!known_keys().count(key))
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty value for " + key);
        if (!cfg.entries_.emplace(key, value).second)
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " + key);
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

double KeyValueConfig::number(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("config: missing key " + key);
    const std::string& s = it->second;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("config: " + key + " is not a number: " + s);
    return value;
}

double KeyValueConfig::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::int64_t KeyValueConfig::integer_or(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = entries_.at(key);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("config: " + key + " is not an integer: " + s);
    return value;
}

std::string KeyValueConfig::text_or(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

ModelConfig load_model(const KeyValueConfig& cfg) {
    ModelConfig out;
    ModelParams& p = out.params;
    p.d1 = cfg.number("d1");
    p.d2 = cfg.number("d2");
    p.d3 = cfg.number("d3");
    p.mu1 = cfg.number("mu1");
    p.mu2 = cfg.number("mu2");
    p.a1 = cfg.number("a1");
    p.a2 = cfg.number("a2");
    p.alpha = cfg.number("alpha");
    p.beta = cfg.number("beta");
    p.gamma = cfg.number("gamma");

    const std::string kind = cfg.text_or("chi_kind", "constant");
    if (kind == "constant") {
        out.sensitivity = SensitivitySpec::constant(cfg.number("chi1"), cfg.number("chi2"));
    } else if (kind == "reciprocal") {
        out.sensitivity = SensitivitySpec::reciprocal(cfg.number("K1"), cfg.number("K2"));
    } else {
        throw ConfigError("config: chi_kind must be 'constant' or 'reciprocal'");
    }

    const auto bounds = sensitivity_bounds(out.sensitivity, default_sample_grid());
    p.M1 = cfg.number_or("M1", bounds[0]);
    p.M2 = cfg.number_or("M2", bounds[1]);
    validate(p);
    if (out.sensitivity.kind() == SensitivitySpec::Kind::constant &&
        (p.M1 < out.sensitivity.coefficients()[0] || p.M2 < out.sensitivity.coefficients()[1]))
        throw ConfigError("config: M1, M2 must bound chi1, chi2");
    return out;
}

SolverSetup load_solver(const KeyValueConfig& cfg, const std::filesystem::path& base_dir) {
    SolverSetup setup;
    const std::int64_t nx = cfg.integer_or("nx", 128);
    const std::int64_t ny = cfg.integer_or("ny", 0);
    if (nx < 8 || ny < 0) throw ConfigError("config: nx must be >= 8 and ny >= 0");
    const double lx = cfg.number_or("lx", 1.0);
    setup.grid = ny == 0 ? Grid::line(lx, static_cast<std::size_t>(nx))
                         : Grid::rect(lx, cfg.number_or("ly", 1.0), static_cast<std::size_t>(nx),
                                      static_cast<std::size_t>(ny));

    SolverConfig& s = setup.solver;
    s.dt = cfg.number_or("dt", 1e-3);
    s.t_end = cfg.number_or("t_end", 1.0);
    const std::string scheme = cfg.text_or("scheme", "explicit-euler");
    if (scheme == "explicit-euler" || scheme == "explicit")
        s.scheme = Scheme::explicit_euler;
    else if (scheme == "imex")
        s.scheme = Scheme::imex;
    else
        throw ConfigError("config: scheme must be 'explicit-euler' or 'imex'");
    s.cfl_safety = cfg.number_or("cfl_safety", 0.9);
    const std::int64_t every = cfg.integer_or("snapshot_every", 100);
    if (every < 0) throw ConfigError("config: snapshot_every must be >= 0");
    s.snapshot_every = static_cast<std::size_t>(every);
    const std::int64_t seed = cfg.integer_or("seed", 1);
    if (seed < 0) throw ConfigError("config: seed must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
    if (!(s.dt > 0.0) || !(s.t_end >= 0.0) || !(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0))
        throw ConfigError("config: need dt > 0, t_end >= 0, cfl_safety in (0,1]");

    InitialData& init = setup.init;
    init.seed = s.seed;
    init.amplitude = cfg.number_or("init_amplitude", 0.1);
    const std::string kind = cfg.text_or("init_kind", "random");
    if (kind == "random") {
        init.kind = InitialData::Kind::random;
    } else if (kind == "perturbation") {
        init.kind = InitialData::Kind::perturbation;
    } else if (kind == "steady") {
        init.kind = InitialData::Kind::steady;
    } else if (kind == "file") {
        init.kind = InitialData::Kind::from_file;
        if (!cfg.has("init_file")) throw ConfigError("config: init_kind=file needs init_file");
        // init_file names a directory holding u.csv, v.csv, w.csv.
        const std::filesystem::path dir = base_dir / cfg.text_or("init_file", "");
        init.fields = FieldTriple{read_field_csv(dir / "u.csv", setup.grid),
                                  read_field_csv(dir / "v.csv", setup.grid),
                                  read_field_csv(dir / "w.csv", setup.grid)};
    } else {
        throw ConfigError("config: init_kind must be random, perturbation, steady or file");
    }
    return setup;
}

}  // namespace chemostab

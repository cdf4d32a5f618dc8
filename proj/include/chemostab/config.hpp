#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "chemostab/model.hpp"
#include "chemostab/solver.hpp"

namespace chemostab {

/// Flat `key = value` text; `#` starts a comment. Unknown keys are rejected.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    /// FNV-1a of the source text.
    std::uint64_t hash() const { return hash_; }

private:
    std::map<std::string, std::string> entries_;
    std::uint64_t hash_ = 0;
};

struct ModelConfig {
    ModelParams params;
    SensitivitySpec sensitivity = SensitivitySpec::constant(0.0, 0.0);
};

/// Model keys: d1 d2 d3 mu1 mu2 a1 a2 alpha beta gamma chi_kind chi1 chi2 K1 K2 M1 M2.
/// chi_kind is `constant` (chi1, chi2) or `reciprocal` (K1, K2). M1, M2 default to
/// the sensitivity maxima over the default sample grid. Throws ConfigError.
ModelConfig load_model(const KeyValueConfig& cfg);

struct SolverSetup {
    Grid grid;
    SolverConfig solver;
    InitialData init;
};

/// Solver keys: nx ny lx ly dt t_end scheme cfl_safety snapshot_every init_kind
/// init_amplitude seed init_file. ny absent or 0 selects a 1D grid. init_file is
/// resolved relative to `base_dir`. Throws ConfigError.
SolverSetup load_solver(const KeyValueConfig& cfg,
                        const std::filesystem::path& base_dir = ".");

}  // namespace chemostab

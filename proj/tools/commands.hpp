#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace chemostab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct Options {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    /// s0, s1, t0, t1.
    std::array<double, 4> rect{0.0, 10.0, 0.0, 10.0};
    int res = 50;
    /// Fractions of the total time used by `rate`.
    std::array<double, 2> window{0.25, 0.90};
    double min_rate = 0.0;
    double slack = 0.1;
};

int cmd_check(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_atlas(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_energy(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_rate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_compare_regions(const Options& opt, std::ostream& out, std::ostream& err);

/// Dispatches on the command name; unknown names return kUsage.
int run_command(const std::string& command, const Options& opt, std::ostream& out,
                std::ostream& err);

}  // namespace chemostab::cli

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chemostab/lyapunov.hpp"
#include "chemostab/solver.hpp"

namespace chemostab {

inline constexpr const char* kDiagnosticsHeader =
    "time,du_inf,dv_inf,dw_inf,min_u,min_v,min_w,mass_u,mass_v,mass_w,gradw2";
inline constexpr const char* kEnergyHeader =
    "time,A,B,C,E,dist_u2,dist_v2,dist_w2,grad_w2,E_rate";

/// Rows "x,value" (1D) or "x,y,value" (2D) with a header line.
void write_field_csv(const std::filesystem::path& path, const Grid& grid,
                     std::span<const double> values);
/// Reads a file written by write_field_csv; throws ConfigError on shape mismatch.
std::vector<double> read_field_csv(const std::filesystem::path& path, const Grid& grid);

std::string diagnostics_row(const Diagnostics& d);
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<Diagnostics>& rows);
std::vector<Diagnostics> read_diagnostics_csv(const std::filesystem::path& path);

/// E_rate is left empty when absent.
std::string energy_row(const EnergyRecord& r);

/// Splits one CSV line on commas.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace chemostab

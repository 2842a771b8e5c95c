#pragma once

#include "fbpme/grid.hpp"
#include "fbpme/lp.hpp"

#include <string>

#include <json.hpp>

namespace fbpme {

// Doubles printed with 17 significant digits so text round-trips exactly.
std::string fmt17(double v);

// FBPM snapshot: magic "FBPM", version u32 LE, n u32, N u32, L f64, then
// N^n (re, im) f64 LE pairs in row-major frequency order.
void write_field_snapshot(const std::string& path, const SpectralField& U);
SpectralField read_field_snapshot(const std::string& path);

// Long-format trajectory CSV, one row per (t, j), preceded by a single
// "# fbpme-trajectory v1 {json}" header carrying grid and norm metadata.
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);
TrajectoryRecord read_trajectory_csv(const std::string& path);

// Write-temp-then-rename so interrupted runs never leave a partial document.
void write_json_atomic(const std::string& path, const nlohmann::json& doc);

}  // namespace fbpme

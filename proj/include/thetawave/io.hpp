#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thetawave/diagnostics.hpp"
#include "thetawave/dynamics.hpp"
#include "thetawave/grid.hpp"
#include "thetawave/lagrangian.hpp"

namespace theta {

struct FieldSnapshot {
  Field field;
  double time = 0;
  double theta = 0;
};

// Snapshot format: one header line "n,L,origin,time,theta", then n lines
// "x,value"; all floats at 17 significant digits for lossless round trips.
void write_field_snapshot(const std::filesystem::path& path, const Field& f,
                          double time, double theta);
FieldSnapshot read_field_snapshot(const std::filesystem::path& path);

// Columns: time,mass_u,mass_m,h1_sq,m_l2_sq,lp_momentum,dhh,sup_u,sup_ux,
// min_ux,sign_ok; optional quantities leave the cell empty.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& recs);

void write_paths_csv(const std::filesystem::path& path,
                     const std::vector<CharacteristicPath>& paths);

void write_riccati_csv(const std::filesystem::path& path,
                       const RiccatiTrace& trace);

std::string format_full(double v);  // 17 significant digits

// Output root: THETA_WAVE_OUT env var when set, else the given default.
std::filesystem::path output_root(const std::string& fallback = "runs");

}  // namespace theta

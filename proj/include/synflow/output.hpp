/// @file output.hpp
/// @brief Artifact writers: diagnostics CSV, legacy VTK snapshots, run summary.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "synflow/solver.hpp"

namespace synflow {

/// "t,kinetic_energy,...,holder_c" (no trailing newline).
std::string diagnostics_csv_header();
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& diag);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& diag);

/// Legacy VTK STRUCTURED_POINTS header for an n x n point lattice over the
/// domain (square: closed [0, L]^2; torus: [0, L)^2), ending with the POINT_DATA line.
std::string vtk_header(const Domain& domain, int n, double t);

/// Header plus VECTORS velocity and SCALARS concentration evaluated through the bases.
std::string vtk_snapshot(const GalerkinModel& model, const GalerkinState& state, int n);
void write_vtk_snapshot(const std::string& path, const GalerkinModel& model,
                        const GalerkinState& state, int n);

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = true;
  std::string detail;
};

struct Summary {
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<Check> checks;

  bool passed() const;
  std::string text() const;
};

void write_text(const std::string& path, const std::string& content);

/// Creates the directory (and parents) if needed; InputError on failure.
void ensure_directory(const std::string& path);

std::string format_double(double v);

}  // namespace synflow

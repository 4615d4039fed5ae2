#include "synflow/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "synflow/errors.hpp"

namespace synflow {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string diagnostics_csv_header() {
  std::string h;
  for (const auto& c : diagnostics_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& diag) {
  std::string out = diagnostics_csv_header() + "\n";
  for (const auto& d : diag) {
    for (double v : {d.t, d.kinetic_energy, d.dissipation, d.work, d.conc_energy, d.flux_dissipation,
                     d.c_min, d.c_max}) {
      out += format_double(v) + ",";
    }
    out += std::to_string(d.clamp_count) + ",";
    out += format_double(d.lux_grad_u) + "," + format_double(d.lux_stress) + "," +
           format_double(d.holder_c) + "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << content;
  if (!f) throw InputError("write failed for '" + path + "'");
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw InputError("cannot create directory '" + path + "': " + ec.message());
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& diag) {
  write_text(path, diagnostics_csv(diag));
}

namespace {

double lattice_spacing(const Domain& d, int n) {
  return d.mode == DomainMode::UnitSquareDirichlet ? d.extent / (n - 1) : d.extent / n;
}

}  // namespace

std::string vtk_header(const Domain& domain, int n, double t) {
  if (n < 2) throw InputError("vtk: lattice needs at least 2 points per axis");
  const double h = lattice_spacing(domain, n);
  std::ostringstream s;
  s << "# vtk DataFile Version 3.0\n"
    << "synflow snapshot t=" << format_double(t) << "\n"
    << "ASCII\n"
    << "DATASET STRUCTURED_POINTS\n"
    << "DIMENSIONS " << n << " " << n << " 1\n"
    << "ORIGIN 0 0 0\n"
    << "SPACING " << format_double(h) << " " << format_double(h) << " 1\n"
    << "POINT_DATA " << n * n << "\n";
  return s.str();
}

std::string vtk_snapshot(const GalerkinModel& model, const GalerkinState& state, int n) {
  const Domain& d = model.scenario().domain;
  const double h = lattice_spacing(d, n);
  std::string out = vtk_header(d, n, state.t);
  std::string vel = "VECTORS velocity double\n";
  std::string conc = "SCALARS concentration double 1\nLOOKUP_TABLE default\n";
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Point x{ix * h, iy * h};
      const Vec2 u = model.velocity_basis().evaluate(state.a, x);
      vel += format_double(u[0]) + " " + format_double(u[1]) + " 0\n";
      conc += format_double(model.concentration_basis().evaluate(state.b, x)) + "\n";
    }
  }
  return out + vel + conc;
}

void write_vtk_snapshot(const std::string& path, const GalerkinModel& model,
                        const GalerkinState& state, int n) {
  write_text(path, vtk_snapshot(model, state, n));
}

bool Summary::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string Summary::text() const {
  std::string out;
  for (const auto& [k, v] : values) out += k + ": " + v + "\n";
  for (const auto& c : checks) {
    out += "check " + c.name + ": " + (c.passed ? "PASS" : "FAIL") + " value=" + format_double(c.value) +
           " bound=" + format_double(c.bound);
    if (!c.detail.empty()) out += " (" + c.detail + ")";
    out += "\n";
  }
  out += std::string("status: ") + (passed() ? "pass" : "fail") + "\n";
  return out;
}

}  // namespace synflow

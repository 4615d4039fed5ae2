#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "synflow/config.hpp"
#include "synflow/output.hpp"

using namespace synflow;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("diagnostics header matches the golden file") {
  CHECK(diagnostics_csv_header() + "\n" == read_file(SYNFLOW_GOLDEN_DIR "/diagnostics_header.csv"));
  CHECK(split(diagnostics_csv_header(), ',') == diagnostics_columns());
}

TEST_CASE("VTK header matches the golden file") {
  Domain d = Domain::unit_square();
  CHECK(vtk_header(d, 3, 0.5) == read_file(SYNFLOW_GOLDEN_DIR "/vtk_header.txt"));
  // torus lattice is half open: spacing L / n
  const std::string t = vtk_header(Domain::torus(), 4, 0.0);
  CHECK(t.find("SPACING " + format_double(Domain::torus().extent / 4.0)) != std::string::npos);
  CHECK_THROWS_AS(vtk_header(d, 1, 0.0), InputError);
}

TEST_CASE("diagnostics CSV round-trips every value exactly") {
  std::vector<DiagnosticsRecord> diag(3);
  for (int i = 0; i < 3; ++i) {
    auto& r = diag[i];
    r.t = 0.1 * i;
    r.kinetic_energy = 1.0 / 3.0 + i;
    r.dissipation = std::exp(-i);
    r.work = -0.2 * i;
    r.conc_energy = std::numeric_limits<double>::min() * (i + 1);
    r.flux_dissipation = 1e300;
    r.c_min = -1e-17;
    r.c_max = 0.9999999999999999;
    r.clamp_count = 7 * i;
    r.lux_grad_u = std::sqrt(2.0);
    r.lux_stress = std::acos(-1.0);
    r.holder_c = 0.0;
  }
  const auto lines = split(diagnostics_csv(diag), '\n');
  REQUIRE(lines.size() == 4);
  for (int i = 0; i < 3; ++i) {
    const auto f = split(lines[i + 1], ',');
    REQUIRE(f.size() == 12);
    const auto& r = diag[i];
    CHECK(std::stod(f[0]) == r.t);
    CHECK(std::stod(f[1]) == r.kinetic_energy);
    CHECK(std::stod(f[2]) == r.dissipation);
    CHECK(std::stod(f[3]) == r.work);
    CHECK(std::stod(f[4]) == r.conc_energy);
    CHECK(std::stod(f[5]) == r.flux_dissipation);
    CHECK(std::stod(f[6]) == r.c_min);
    CHECK(std::stod(f[7]) == r.c_max);
    CHECK(std::stol(f[8]) == r.clamp_count);
    CHECK(std::stod(f[9]) == r.lux_grad_u);
    CHECK(std::stod(f[10]) == r.lux_stress);
    CHECK(std::stod(f[11]) == r.holder_c);
  }
}

TEST_CASE("VTK snapshot layout") {
  Config c = default_config();
  apply_preset(c, "heat_only");
  c.quadrature_resolution = 8;
  const GalerkinModel model(make_scenario(c));
  const auto s = model.initial_state();
  const std::string vtk = vtk_snapshot(model, s, 5);
  CHECK(vtk.rfind(vtk_header(model.scenario().domain, 5, 0.0), 0) == 0);
  const auto lines = split(vtk, '\n');
  // 8 header lines, 1 + 25 vector lines, 2 + 25 scalar lines
  CHECK(lines.size() == 8u + 26u + 27u);
  CHECK(lines[8] == "VECTORS velocity double");
  CHECK(lines[34] == "SCALARS concentration double 1");
  CHECK(lines[35] == "LOOKUP_TABLE default");
  // corner points lie on the boundary where c0 vanishes; the centre carries the peak
  CHECK(std::abs(std::stod(lines[36])) < 1e-14);
  CHECK(std::stod(lines[36 + 12]) == doctest::Approx(model.concentration_basis().evaluate(s.b, {0.5, 0.5})));

  const auto dir = std::filesystem::temp_directory_path() / "synflow_output_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  ensure_directory(dir.string());
  write_vtk_snapshot((dir / "snap.vtk").string(), model, s, 5);
  CHECK(read_file((dir / "snap.vtk").string()) == vtk);
  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("run summary text") {
  Summary s;
  s.values.push_back({"scenario", "heat_only"});
  s.checks.push_back({"energy_identity", 1e-7, 1e-5, true, ""});
  CHECK(s.passed());
  CHECK(s.text() == "scenario: heat_only\ncheck energy_identity: PASS value=9.9999999999999995e-08 bound=1.0000000000000001e-05\nstatus: pass\n");
  s.checks.push_back({"undershoot", 0.2, 0.1, false, "t=0.5"});
  CHECK_FALSE(s.passed());
  CHECK(s.text().find("check undershoot: FAIL value=0.20000000000000001 bound=0.10000000000000001 (t=0.5)\n") !=
        std::string::npos);
  CHECK(s.text().find("status: fail\n") != std::string::npos);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "synflow/config.hpp"

using namespace synflow;

TEST_CASE("empty input yields the defaults") {
  CHECK(parse_config_text("") == default_config());
  CHECK(parse_config_text("# only a comment\n\n   \n") == default_config());
  const Config c = default_config();
  CHECK(c.scenario == "taylor_green");
  CHECK(c.domain_mode == DomainMode::PeriodicTorus);
  CHECK(c.study == StudyKind::SingleRun);
}

TEST_CASE("values are parsed and trimmed") {
  const Config c = parse_config_text(
      "stress.nu0 = 0.25   # trailing comment\n"
      "  basis.n=12\n"
      "integrator.scheme = implicit_euler\n"
      "study.n_list = 2, 4, 8\n");
  CHECK(c.nu0 == 0.25);
  CHECK(c.basis_n == 12);
  CHECK(c.scheme == Scheme::ImplicitEuler);
  CHECK(c.n_list == std::vector<int>{2, 4, 8});
}

TEST_CASE("range errors") {
  CHECK_THROWS_AS(parse_config_text("index.p_min = 0.9\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("index.p_min = 2.5\nindex.p_max = 2.0\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("stress.nu0 = -1\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("basis.n = 0\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("scenario = nowhere\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("seed = -3\n"), RangeError);
  CHECK(parse_config_text("seed = 18446744073709551615\n").seed == 18446744073709551615ull);
  CHECK_THROWS_AS(parse_config_text("initial.c_amplitude = 2\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("scenario = synovial\nforcing.kind = taylor_green\nforcing.amplitude = 1\n"),
                  RangeError);
}

TEST_CASE("unknown keys report their line") {
  try {
    parse_config_text("stress.nu0 = 0.2\n\nstress.nu3 = 1\n");
    FAIL("expected UnknownKey");
  } catch (const UnknownKey& e) {
    CHECK(e.key() == "stress.nu3");
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("malformed lines report their line") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("basis.n = 4\nno equals sign\n") == 2);
  CHECK(line_of("basis.n = four\n") == 1);
  CHECK(line_of("stress.nu0 = 0.1x\n") == 1);
  CHECK(line_of("basis.n = 4\nbasis.m = 4\nbasis.n = 8\n") == 3);
  CHECK(line_of(" = 3\n") == 1);
}

TEST_CASE("the scenario preset applies before other keys") {
  const Config a = parse_config_text("stress.nu0 = 0.3\nscenario = synovial\n");
  CHECK(a.scenario == "synovial");
  CHECK(a.nu0 == 0.3);
  CHECK(a.domain_mode == DomainMode::UnitSquareDirichlet);
  Config b = default_config();
  apply_preset(b, "synovial");
  b.nu0 = 0.3;
  CHECK(a == b);
}

TEST_CASE("presets round-trip through the canonical dump") {
  for (const auto& name : preset_names()) {
    Config c = default_config();
    apply_preset(c, name);
    CHECK_NOTHROW(c.validate());
    CHECK_NOTHROW(make_scenario(c).validate());
    CHECK(parse_config_text(dump_config(c)) == c);
  }
  const std::string dump = dump_config(default_config());
  for (const auto& key : config_keys()) CHECK(dump.find(key + " = ") != std::string::npos);
}

TEST_CASE("randomized configurations round-trip") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> ui(1, 40);
  for (int k = 0; k < 200; ++k) {
    Config c = default_config();
    apply_preset(c, preset_names()[static_cast<std::size_t>(k) % preset_names().size()]);
    c.nu0 = 0.01 + u(rng);
    c.nu1 = 0.5 + u(rng);
    c.nu2 = u(rng) * 3.0;
    c.p_min = 1.05 + u(rng);
    c.p_max = c.p_min + u(rng);
    c.c_ref = 0.1 + u(rng);
    c.k0 = 1e-3 + u(rng) / 7.0;
    c.k1 = u(rng) / 3.0;
    c.t_final = 0.1 + u(rng);
    c.basis_n = ui(rng);
    c.basis_m = ui(rng);
    c.output_cadence = ui(rng);
    c.epsilon = u(rng) / 10.0;
    c.rtol = 1e-12 + u(rng) * 1e-6;
    c.seed = rng();
    c.n_list = {ui(rng), 41 + ui(rng) / 2};
    c.eps_list = {0.5 * u(rng) + 0.5, 0.4 * u(rng)};
    c.output_dir = "out_" + std::to_string(k);
    REQUIRE_NOTHROW(c.validate());
    CHECK(parse_config_text(dump_config(c)) == c);
  }
}

TEST_CASE("configuration files") {
  const auto path = std::filesystem::temp_directory_path() / "synflow_config_test.cfg";
  {
    std::ofstream out(path);
    out << "scenario = heat_only\nbasis.m = 9\n";
  }
  const Config c = parse_config(path.string());
  CHECK(c.scenario == "heat_only");
  CHECK(c.basis_m == 9);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(parse_config(path.string()), InputError);
}

TEST_CASE("study kinds") {
  for (auto k : {StudyKind::SingleRun, StudyKind::NRefinement, StudyKind::MRefinement, StudyKind::EpsilonStudy,
                 StudyKind::PropertySuite}) {
    CHECK(study_kind_from_string(to_string(k)) == k);
  }
  CHECK(parse_config_text("study.kind = epsilon_study\n").study == StudyKind::EpsilonStudy);
  CHECK_THROWS_AS(study_kind_from_string("sweep"), InputError);
}

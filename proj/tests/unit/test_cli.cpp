// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "hexwave/csv.hpp"

using namespace hexwave;
using namespace hexwave::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(HEXWAVE_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& cmd, const fs::path& cfg, const fs::path& out) {
  std::ostringstream log, err;
  return run_command(cmd, cfg, out, 1, std::nullopt, log, err);
}

}  // namespace

TEST_CASE("malformed config exits 2 without writing outputs") {
  const fs::path d = scratch("malformed");
  const fs::path cfg = write_config(d, "{\"bloch\": {\"M\": 4,}");
  CHECK(run("bands", cfg, d / "out") == kConfigError);
  CHECK_FALSE(fs::exists(d / "out"));
  const fs::path cfg2 = write_config(d, R"({"bloch": {"M": 4, "extra": 1}})");
  CHECK(run("bands", cfg2, d / "out") == kConfigError);
  CHECK_FALSE(fs::exists(d / "out"));
  CHECK(run("bands", d / "missing.json", d / "out") == kConfigError);
}

TEST_CASE("bands on the free medium starts at zero and is deterministic") {
  const fs::path d = scratch("bands");
  const fs::path cfg =
      write_config(d, R"({"weightA": {"kind": "free"}, "bloch": {"M": 5, "n_bands": 4, "points_per_segment": 3}})");
  REQUIRE(run("bands", cfg, d / "a") == kOk);
  REQUIRE(run("bands", cfg, d / "b") == kOk);
  CHECK(slurp(d / "a" / "bands.csv") == slurp(d / "b" / "bands.csv"));
  const auto rows = read_csv(d / "a" / "bands.csv");
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"k_index", "s", "kx", "ky", "band", "energy"});
  bool zero = false;
  for (std::size_t i = 1; i < rows.size(); ++i) zero = zero || std::abs(std::stod(rows[i][5])) < 1e-9;
  CHECK(zero);
  const auto manifest = nlohmann::json::parse(slurp(d / "a" / "manifest.json"));
  CHECK(manifest["command"] == "bands");
  CHECK(manifest["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("dirac writes the point data") {
  const fs::path d = scratch("dirac");
  const fs::path cfg = write_config(d, R"({"bloch": {"M": 8}})");
  REQUIRE(run("dirac", cfg, d / "o") == kOk);
  const auto j = nlohmann::json::parse(slurp(d / "o" / "dirac.json"));
  CHECK(j["E_D"].get<double>() == doctest::Approx(17.8834).epsilon(1e-3));
  const fs::path free_cfg = write_config(d, R"({"weightA": {"kind": "free"}, "bloch": {"M": 6}})");
  CHECK(run("dirac", free_cfg, d / "f") == kInvariantFailure);
}

TEST_CASE("validate rejects domain walls and oversized runs") {
  const fs::path d = scratch("validate");
  const fs::path wall = write_config(d, R"({"kappa": {"kind": "tanh_wall"}})");
  CHECK(run("validate", wall, d / "w") == kConfigError);
  CHECK_FALSE(fs::exists(d / "w"));
  const fs::path big = write_config(d, R"({"bloch": {"M": 8}, "wave": {"memory_budget_bytes": 1000}})");
  CHECK(run("validate", big, d / "b") == kResourceRefusal);
}

TEST_CASE("edge writes the dispersion and the zero mode") {
  const fs::path d = scratch("edge");
  const fs::path cfg = write_config(d, R"({"edge": {"L_zeta": 40, "n_zeta": 400, "k_par": [0, 0.1], "count": 2}})");
  REQUIRE(run("edge", cfg, d / "o") == kOk);
  CHECK(read_csv(d / "o" / "edge_dispersion.csv").size() == 5);
  CHECK(read_csv(d / "o" / "edge_zero_mode.csv").size() == 401);
  const auto m = nlohmann::json::parse(slurp(d / "o" / "manifest.json"));
  CHECK(m["results"]["zero_mode_error"].get<double>() < 1e-3);
}

TEST_CASE("unknown command exits 2") {
  const fs::path d = scratch("unknown");
  const fs::path cfg = write_config(d, "{}");
  CHECK(run("frobnicate", cfg, d / "o") == kConfigError);
}

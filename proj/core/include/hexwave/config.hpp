// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hexwave/dirac.hpp"
#include "hexwave/edge.hpp"
#include "hexwave/envelope.hpp"
#include "hexwave/error.hpp"
#include "hexwave/medium.hpp"
#include "hexwave/wave.hpp"

namespace hexwave {

// Configuration problem; `pointer` is the JSON pointer of the offending value.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : InvalidArgument(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct WeightASection {
  std::string kind = "honeycomb";  // honeycomb | free
  double delta = 0.1;
};

struct WeightBSection {
  std::string kind = "sigma2";
  double delta_b = 1.0;
  std::string profile = "three_cosine";  // three_cosine | constant
};

struct BlochSection {
  int M = 12;
  int n_bands = 8;
  int points_per_segment = 30;
};

struct DiracSection {
  double tol_deg = 1e-6;
  double q0 = 1e-2;  // in units of |K|
  std::vector<double> fit_radii{2.5e-4, 5e-4, 7.5e-4, 1e-3};  // in units of |K|
  int n_scan = 12;
};

struct EnvelopeSection {
  Figure1Options figure1;
};

struct EdgeSection {
  Vec2 Kv{0.0, 1.0};
  double L_zeta = 300.0;
  int n_zeta = 4000;
  std::vector<double> k_par{-0.2, -0.1, 0.0, 0.1, 0.2};
  double c = 1.0;
  double m = 1.0;
  double kappa_inf = 1.0;
  int count = 6;
};

struct DecomposeSection {
  int P = 6;
  int n = 8;
  int n_bands = 0;  // 0 keeps every band
  double epsilon = 0.5;
  double envelope_width = 1.0;
  std::string input;  // optional HGR file on the supercell grid
};

struct ExperimentConfig {
  std::string lattice = "triangular";
  WeightASection weightA;
  WeightBSection weightB;
  SlowModulation kappa{ConstantKappa{1.0}};
  BlochSection bloch;
  DiracSection dirac;
  EnvelopeSection envelope;
  EdgeSection edge;
  ScalingConfig wave;
  DecomposeSection decompose;
  std::string output_directory = "out";

  PeriodicMatrixField make_A() const;
  PeriodicMatrixField make_B() const;
  DiracOptions dirac_options() const;
};

// Missing sections and keys take their defaults; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
// Checks every module precondition that can be checked without computing.
void validate_config(const ExperimentConfig& c);
// Canonical form with every default filled in.
nlohmann::json to_json(const ExperimentConfig& c);

std::uint64_t fnv1a_64(std::string_view bytes);
std::string hex64(std::uint64_t v);

struct Manifest {
  std::string command;
  nlohmann::json config;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  nlohmann::json results = nlohmann::json::object();
  int workers = 1;
  std::optional<std::uint64_t> seed;

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& dir) const;
};

}  // namespace hexwave

// SPDX-License-Identifier: Apache-2.0
#include "hexwave/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hexwave {

namespace {

using nlohmann::json;

// Reads typed members of one JSON object and remembers which keys it consumed.
class Section {
 public:
  Section(const json* j, std::string pointer) : j_(j), ptr_(std::move(pointer)) {
    if (j_ && !j_->is_object()) throw ConfigError(ptr_.empty() ? "/" : ptr_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_ && j_->contains(key);
  }
  std::string at(const std::string& key) const { return ptr_ + "/" + key; }
  const json& raw(const std::string& key) const { return (*j_)[key]; }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(raw(key), at(key));
  }

  Section sub(const std::string& key) {
    if (!has(key)) return Section(nullptr, at(key));
    return Section(&raw(key), at(key));
  }

  void finish() const {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
  }

  template <class T>
  static T convert(const json& v, const std::string& ptr) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(ptr, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(ptr, "expected an integer");
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(ptr, "expected a number");
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(ptr, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, Vec2>) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(ptr, "expected a 2-vector of numbers");
      return Vec2(v[0].get<double>(), v[1].get<double>());
    } else {
      if (!v.is_array()) throw ConfigError(ptr, "expected an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(convert<typename T::value_type>(v[i], ptr + "/" + std::to_string(i)));
      return out;
    }
  }

 private:
  const json* j_;
  std::string ptr_;
  std::set<std::string> seen_;
};

SlowModulation parse_kappa(Section s) {
  std::string kind = "constant";
  s.get("kind", kind);
  SlowModulation out;
  if (kind == "constant") {
    ConstantKappa k;
    s.get("value", k.value);
    out = k;
  } else if (kind == "tanh_wall") {
    TanhWallKappa k;
    s.get("direction", k.wall_direction);
    s.get("kappa_inf", k.kappa_inf);
    out = k;
  } else if (kind == "curved_wall") {
    CurvedWallKappa k;
    s.get("amplitude", k.amplitude);
    s.get("kappa_inf", k.kappa_inf);
    out = k;
  } else if (kind == "fourier") {
    FourierKappa k;
    s.get("period", k.period);
    if (s.has("terms")) {
      const json& terms = s.raw("terms");
      if (!terms.is_array()) throw ConfigError(s.at("terms"), "expected an array");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        Section t(&terms[i], s.at("terms") + "/" + std::to_string(i));
        std::vector<int> h{0, 0};
        FourierKappa::Term term;
        t.get("h", h);
        if (h.size() != 2) throw ConfigError(t.at("h"), "expected two integers");
        term.h = {h[0], h[1]};
        t.get("cos", term.cos_amplitude);
        t.get("sin", term.sin_amplitude);
        t.finish();
        k.terms.push_back(term);
      }
    }
    out = k;
  } else {
    throw ConfigError(s.at("kind"), "unknown kappa kind '" + kind + "' (constant, tanh_wall, curved_wall, fourier)");
  }
  s.finish();
  return out;
}

json kappa_json(const SlowModulation& k) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantKappa>) {
          return {{"kind", "constant"}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, TanhWallKappa>) {
          return {{"kind", "tanh_wall"},
                  {"direction", {v.wall_direction(0), v.wall_direction(1)}},
                  {"kappa_inf", v.kappa_inf}};
        } else if constexpr (std::is_same_v<T, CurvedWallKappa>) {
          return {{"kind", "curved_wall"}, {"amplitude", v.amplitude}, {"kappa_inf", v.kappa_inf}};
        } else {
          json terms = json::array();
          for (const auto& t : v.terms)
            terms.push_back({{"h", {t.h.m1, t.h.m2}}, {"cos", t.cos_amplitude}, {"sin", t.sin_amplitude}});
          return {{"kind", "fourier"}, {"period", v.period}, {"terms", terms}};
        }
      },
      k.kind());
}

void require(bool ok, const std::string& ptr, const std::string& msg) {
  if (!ok) throw ConfigError(ptr, msg);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

PeriodicMatrixField ExperimentConfig::make_A() const {
  return make_honeycomb_scalar_weight(weightA.kind == "free" ? 0.0 : weightA.delta);
}

PeriodicMatrixField ExperimentConfig::make_B() const {
  const CosineProfile p = weightB.profile == "constant" ? CosineProfile::constant(1.0) : CosineProfile::three_cosine();
  return make_sigma2_weight(weightB.delta_b, p);
}

DiracOptions ExperimentConfig::dirac_options() const {
  DiracOptions o;
  o.truncation = bloch.M;
  o.tol_deg = dirac.tol_deg;
  o.n_scan = dirac.n_scan;
  o.q0_factor = dirac.q0;
  return o;
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Section root(&j, "");

  {
    Section s = root.sub("lattice");
    s.get("kind", c.lattice);
    s.finish();
  }
  {
    Section s = root.sub("weightA");
    s.get("kind", c.weightA.kind);
    s.get("delta", c.weightA.delta);
    s.finish();
  }
  {
    Section s = root.sub("weightB");
    s.get("kind", c.weightB.kind);
    s.get("delta_b", c.weightB.delta_b);
    s.get("profile", c.weightB.profile);
    s.finish();
  }
  if (root.has("kappa")) c.kappa = parse_kappa(Section(&j["kappa"], "/kappa"));
  {
    Section s = root.sub("bloch");
    s.get("M", c.bloch.M);
    s.get("n_bands", c.bloch.n_bands);
    s.get("points_per_segment", c.bloch.points_per_segment);
    s.finish();
  }
  {
    Section s = root.sub("dirac");
    s.get("tol_deg", c.dirac.tol_deg);
    s.get("q0", c.dirac.q0);
    s.get("fit_radii", c.dirac.fit_radii);
    s.get("n_scan", c.dirac.n_scan);
    s.finish();
  }
  {
    Section s = root.sub("envelope");
    Figure1Options& f = c.envelope.figure1;
    s.get("L", f.L);
    s.get("N", f.N);
    s.get("dT", f.dT);
    if (s.has("T_end")) {
      const double t_end = Section::convert<double>(s.raw("T_end"), s.at("T_end"));
      if (!s.has("snapshot_times")) f.snapshot_times = {0.0, 0.5 * t_end, t_end};
    }
    s.get("snapshot_times", f.snapshot_times);
    s.get("X1_start", f.X1_start);
    s.get("c", f.c);
    s.get("m", f.m);
    s.get("curve_amplitude", f.curve_amplitude);
    s.get("polarization", f.polarization);
    s.get("near_distance", f.near_distance);
    s.finish();
  }
  {
    Section s = root.sub("edge");
    EdgeSection& e = c.edge;
    s.get("Kv", e.Kv);
    s.get("L_zeta", e.L_zeta);
    s.get("n_zeta", e.n_zeta);
    s.get("k_par", e.k_par);
    s.get("c", e.c);
    s.get("m", e.m);
    s.get("kappa_inf", e.kappa_inf);
    s.get("count", e.count);
    s.finish();
  }
  {
    Section s = root.sub("wave");
    ScalingConfig& w = c.wave;
    s.get("P0", w.P0);
    s.get("n", w.n);
    s.get("dt_factor", w.dt_factor);
    s.get("epsilons", w.epsilons);
    s.get("rho", w.rho);
    s.get("s", w.s);
    s.get("nu", w.nu);
    s.get("checkpoints", w.checkpoints);
    s.get("massless", w.massless);
    s.get("well_prepared", w.well_prepared);
    s.get("envelope_width", w.envelope_width);
    s.get("slow_dT", w.slow_dT);
    s.get("memory_budget_bytes", w.memory_budget_bytes);
    s.finish();
  }
  {
    Section s = root.sub("decompose");
    DecomposeSection& d = c.decompose;
    s.get("P", d.P);
    s.get("n", d.n);
    s.get("n_bands", d.n_bands);
    s.get("epsilon", d.epsilon);
    s.get("envelope_width", d.envelope_width);
    s.get("input", d.input);
    s.finish();
  }
  {
    Section s = root.sub("output");
    s.get("directory", c.output_directory);
    s.finish();
  }
  root.finish();
  c.wave.kappa = c.kappa;
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate_config(const ExperimentConfig& c) {
  require(c.lattice == "triangular", "/lattice/kind", "only the triangular lattice is supported");
  require(c.weightA.kind == "honeycomb" || c.weightA.kind == "free", "/weightA/kind",
          "expected 'honeycomb' or 'free'");
  require(std::isfinite(c.weightA.delta) && std::abs(c.weightA.delta) < 1.0 / 3.0, "/weightA/delta",
          "|delta| must be below 1/3 for ellipticity");
  require(c.weightB.kind == "sigma2", "/weightB/kind", "only 'sigma2' is supported");
  require(std::isfinite(c.weightB.delta_b), "/weightB/delta_b", "must be finite");
  require(c.weightB.profile == "three_cosine" || c.weightB.profile == "constant", "/weightB/profile",
          "expected 'three_cosine' or 'constant'");
  require(std::isfinite(c.kappa.sup_bound()), "/kappa", "kappa must be bounded");

  require(c.bloch.M >= 1 && c.bloch.M <= 40, "/bloch/M", "truncation must lie in [1, 40]");
  const int dim = (2 * c.bloch.M + 1) * (2 * c.bloch.M + 1);
  require(c.bloch.n_bands >= 1 && c.bloch.n_bands <= dim, "/bloch/n_bands", "must lie in [1, basis size]");
  require(c.bloch.points_per_segment >= 2, "/bloch/points_per_segment", "must be at least 2");

  require(finite_positive(c.dirac.tol_deg), "/dirac/tol_deg", "must be positive");
  require(finite_positive(c.dirac.q0), "/dirac/q0", "must be positive");
  require(c.dirac.n_scan >= 3 && c.dirac.n_scan <= dim, "/dirac/n_scan", "must lie in [3, basis size]");
  require(c.dirac.fit_radii.size() >= 3, "/dirac/fit_radii", "need at least three radii");
  for (std::size_t i = 0; i < c.dirac.fit_radii.size(); ++i)
    require(finite_positive(c.dirac.fit_radii[i]) && c.dirac.fit_radii[i] <= c.dirac.q0,
            "/dirac/fit_radii/" + std::to_string(i), "must lie in (0, q0]");

  const Figure1Options& f = c.envelope.figure1;
  require(finite_positive(f.L), "/envelope/L", "must be positive");
  require(f.N >= 8 && f.N <= 8192, "/envelope/N", "must lie in [8, 8192]");
  require(finite_positive(f.dT), "/envelope/dT", "must be positive");
  require(!f.snapshot_times.empty(), "/envelope/snapshot_times", "need at least one time");
  for (std::size_t i = 0; i < f.snapshot_times.size(); ++i) {
    const double t = f.snapshot_times[i];
    const std::string p = "/envelope/snapshot_times/" + std::to_string(i);
    require(std::isfinite(t) && t >= 0.0, p, "must be non-negative");
    require(std::abs(t / f.dT - std::round(t / f.dT)) <= 1e-9 * std::max(1.0, t / f.dT), p,
            "must be a multiple of dT");
    if (i > 0) require(t >= f.snapshot_times[i - 1], p, "times must be increasing");
  }
  require(finite_positive(f.c), "/envelope/c", "must be positive");
  require(std::isfinite(f.m), "/envelope/m", "must be finite");
  require(f.polarization >= -1 && f.polarization <= 1, "/envelope/polarization", "must be -1, 0 or 1");
  require(f.polarization != 0 || f.m != 0.0, "/envelope/polarization", "cannot be automatic when m = 0");
  require(finite_positive(f.near_distance), "/envelope/near_distance", "must be positive");

  const EdgeSection& e = c.edge;
  require(std::abs(e.Kv.norm() - 1.0) < 1e-12, "/edge/Kv", "must be a unit vector");
  require(finite_positive(e.L_zeta), "/edge/L_zeta", "must be positive");
  require(e.n_zeta >= 16, "/edge/n_zeta", "must be at least 16");
  require(!e.k_par.empty(), "/edge/k_par", "need at least one value");
  require(finite_positive(e.c), "/edge/c", "must be positive");
  require(std::isfinite(e.m) && e.m != 0.0, "/edge/m", "must be finite and nonzero");
  require(finite_positive(e.kappa_inf), "/edge/kappa_inf", "must be positive");
  require(e.count >= 1 && e.count <= e.n_zeta, "/edge/count", "must lie in [1, n_zeta]");

  const ScalingConfig& w = c.wave;
  require(w.P0 >= 1, "/wave/P0", "must be at least 1");
  require(w.n >= 4, "/wave/n", "must be at least 4");
  require(w.dt_factor > 0.0 && w.dt_factor <= 0.5, "/wave/dt_factor", "must lie in (0, 0.5]");
  require(!w.epsilons.empty(), "/wave/epsilons", "need at least one epsilon");
  for (std::size_t i = 0; i < w.epsilons.size(); ++i)
    require(w.epsilons[i] > 0.0 && w.epsilons[i] < 1.0, "/wave/epsilons/" + std::to_string(i),
            "must lie in (0, 1)");
  require(finite_positive(w.rho), "/wave/rho", "must be positive");
  require(w.s == 0 || w.s == 1, "/wave/s", "only s = 0 and s = 1 are measured");
  require(std::isfinite(w.nu) && w.nu >= 0.0 && w.nu < 1.0, "/wave/nu", "must lie in [0, 1)");
  require(w.checkpoints >= 1, "/wave/checkpoints", "must be at least 1");
  require(finite_positive(w.envelope_width), "/wave/envelope_width", "must be positive");
  require(finite_positive(w.slow_dT), "/wave/slow_dT", "must be positive");
  require(finite_positive(w.memory_budget_bytes), "/wave/memory_budget_bytes", "must be positive");
  if (!w.massless)
    require(c.kappa.is_constant() || std::holds_alternative<FourierKappa>(c.kappa.kind()), "/kappa/kind",
            "the wave experiment needs a constant or slow-periodic kappa; domain walls are incompatible with the "
            "periodic supercell");

  const DecomposeSection& d = c.decompose;
  require(d.P >= 1, "/decompose/P", "must be at least 1");
  require(d.n >= 2, "/decompose/n", "must be at least 2");
  require(d.n_bands >= 0, "/decompose/n_bands", "must be non-negative");
  require(finite_positive(d.epsilon), "/decompose/epsilon", "must be positive");
  require(finite_positive(d.envelope_width), "/decompose/envelope_width", "must be positive");

  require(!c.output_directory.empty(), "/output/directory", "must not be empty");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  const Figure1Options& f = c.envelope.figure1;
  const ScalingConfig& w = c.wave;
  return {
      {"lattice", {{"kind", c.lattice}}},
      {"weightA", {{"kind", c.weightA.kind}, {"delta", c.weightA.delta}}},
      {"weightB", {{"kind", c.weightB.kind}, {"delta_b", c.weightB.delta_b}, {"profile", c.weightB.profile}}},
      {"kappa", kappa_json(c.kappa)},
      {"bloch",
       {{"M", c.bloch.M}, {"n_bands", c.bloch.n_bands}, {"points_per_segment", c.bloch.points_per_segment}}},
      {"dirac",
       {{"tol_deg", c.dirac.tol_deg},
        {"q0", c.dirac.q0},
        {"fit_radii", c.dirac.fit_radii},
        {"n_scan", c.dirac.n_scan}}},
      {"envelope",
       {{"L", f.L},
        {"N", f.N},
        {"dT", f.dT},
        {"snapshot_times", f.snapshot_times},
        {"X1_start", f.X1_start},
        {"c", f.c},
        {"m", f.m},
        {"curve_amplitude", f.curve_amplitude},
        {"polarization", f.polarization},
        {"near_distance", f.near_distance}}},
      {"edge",
       {{"Kv", {c.edge.Kv(0), c.edge.Kv(1)}},
        {"L_zeta", c.edge.L_zeta},
        {"n_zeta", c.edge.n_zeta},
        {"k_par", c.edge.k_par},
        {"c", c.edge.c},
        {"m", c.edge.m},
        {"kappa_inf", c.edge.kappa_inf},
        {"count", c.edge.count}}},
      {"wave",
       {{"P0", w.P0},
        {"n", w.n},
        {"dt_factor", w.dt_factor},
        {"epsilons", w.epsilons},
        {"rho", w.rho},
        {"s", w.s},
        {"nu", w.nu},
        {"checkpoints", w.checkpoints},
        {"massless", w.massless},
        {"well_prepared", w.well_prepared},
        {"envelope_width", w.envelope_width},
        {"slow_dT", w.slow_dT},
        {"memory_budget_bytes", w.memory_budget_bytes}}},
      {"decompose",
       {{"P", c.decompose.P},
        {"n", c.decompose.n},
        {"n_bands", c.decompose.n_bands},
        {"epsilon", c.decompose.epsilon},
        {"envelope_width", c.decompose.envelope_width},
        {"input", c.decompose.input}}},
      {"output", {{"directory", c.output_directory}}},
  };
}

std::uint64_t fnv1a_64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

nlohmann::json Manifest::to_json() const {
  json j;
  j["tool"] = "hexwave";
  j["version"] = HEXWAVE_VERSION;
  j["command"] = command;
  j["config"] = config;
  j["config_hash"] = "fnv1a64:" + hex64(fnv1a_64(config.dump()));
  j["workers"] = workers;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  j["results"] = results;
  return j;
}

void Manifest::write(const std::filesystem::path& dir) const {
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
  out << to_json().dump(2) << '\n';
}

}  // namespace hexwave

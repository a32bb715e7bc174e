// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hexwave/bloch.hpp"
#include "hexwave/csv.hpp"
#include "hexwave/dirac.hpp"
#include "hexwave/edge.hpp"
#include "hexwave/envelope.hpp"
#include "hexwave/hgr.hpp"
#include "hexwave/wave.hpp"

namespace hexwave::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Manifest start_manifest(const RunContext& ctx, const std::string& command) {
  Manifest m;
  m.command = command;
  m.config = to_json(ctx.config);
  m.workers = ctx.workers;
  m.seed = ctx.seed;
  return m;
}

std::ostream& log(const RunContext& ctx) {
  static std::ostringstream sink;
  return ctx.log ? *ctx.log : sink;
}

std::string time_tag(double t) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << t;
  std::string s = os.str();
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

void write_envelope_hgr(const fs::path& path, const SpectralGrid& g, const ComplexGrid& a1, const ComplexGrid& a2) {
  HgrFile f;
  f.nx = static_cast<std::uint32_t>(g.n1());
  f.ny = static_cast<std::uint32_t>(g.n2());
  f.x0 = g.origin()(0);
  f.y0 = g.origin()(1);
  f.dx = g.a1().norm() / g.n1();
  f.dy = g.a2().norm() / g.n2();
  f.components = {a1, a2};
  write_hgr(path, f);
}

}  // namespace

int cmd_bands(const RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const PeriodicMatrixField A = c.make_A();
  const auto path = default_band_path(A.lattice(), c.bloch.points_per_segment);
  const BandStructure bs = sweep_path(A, path, c.bloch.n_bands, c.bloch.M, ctx.workers);

  CsvWriter csv(ctx.out_dir / "bands.csv");
  csv.header({"k_index", "s", "kx", "ky", "band", "energy"});
  double s = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) s += (path[i] - path[i - 1]).norm();
    for (int b = 0; b < c.bloch.n_bands; ++b)
      csv.field(static_cast<long long>(i))
          .field(s)
          .field(path[i](0))
          .field(path[i](1))
          .field(b + 1)
          .field(bs.energies(static_cast<Eigen::Index>(i), b))
          .end_row();
  }

  Manifest m = start_manifest(ctx, "bands");
  m.outputs = {"bands.csv"};
  m.results["lipschitz_estimate"] = bs.lipschitz_estimate;
  m.results["n_k"] = path.size();
  m.write(ctx.out_dir);
  log(ctx) << "bands: " << path.size() << " k-points x " << c.bloch.n_bands << " bands\n";
  return kOk;
}

int cmd_dirac(const RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const PeriodicMatrixField A = c.make_A();
  const PeriodicMatrixField B = c.make_B();
  const DiracData d = analyze_dirac_point(A, B, c.dirac_options());
  const double kn = d.point.K.norm();
  std::vector<double> radii;
  for (double r : c.dirac.fit_radii) radii.push_back(r * kn);
  const ConicalFit fit = conical_fit(A, d, radii, {Vec2(1.0, 0.0), Vec2(0.0, 1.0)}, ctx.workers);

  json j = to_json(d);
  j["conical_fit"] = to_json(fit);
  std::ofstream(ctx.out_dir / "dirac.json") << j.dump(2) << '\n';

  Manifest m = start_manifest(ctx, "dirac");
  m.outputs = {"dirac.json"};
  m.results = {{"E_D", d.E_D()},
               {"v_F", d.v_F()},
               {"theta_sharp", d.theta_sharp()},
               {"theta_sharp_sign", d.theta_sharp() > 0 ? 1 : -1},
               {"current_residual", d.current.max_residual},
               {"mass_residual", d.mass.max_residual}};
  const double tol = 1e-8;
  bool ok = d.current.max_residual < tol && d.mass.max_residual < tol && !d.mass.degenerate;
  if (!ok) {
    m.warnings.push_back("identity residual above 1e-8 or vanishing theta_sharp; increase bloch.M or check the "
                         "weights");
  }
  m.write(ctx.out_dir);
  log(ctx) << "dirac: E_D = " << d.E_D() << ", v_F = " << d.v_F() << ", theta_sharp = " << d.theta_sharp() << '\n';
  return ok ? kOk : kInvariantFailure;
}

int cmd_envelope(const RunContext& ctx) {
  const Figure1Options& o = ctx.config.envelope.figure1;
  const Figure1Result r = run_figure1(o);
  Manifest m = start_manifest(ctx, "envelope");
  m.warnings = r.warnings;
  json snaps = json::array();
  const double m0 = r.snapshots.front().mass;
  for (const auto& s : r.snapshots) {
    const std::string name = "alpha_T" + time_tag(s.T) + ".hgr";
    write_envelope_hgr(ctx.out_dir / name, r.grid, s.alpha1, s.alpha2);
    m.outputs.push_back(name);
    snaps.push_back({{"T", s.T},
                     {"file", name},
                     {"mass", s.mass},
                     {"relative_mass_drift", std::abs(s.mass - m0) / m0},
                     {"near_curve_fraction", s.near_curve_fraction},
                     {"boundary_fraction", s.boundary_fraction}});
  }
  CsvWriter csv(ctx.out_dir / "kappa_zero_curve.csv");
  csv.header({"X1", "X2"});
  for (const Vec2& p : r.zero_curve) csv.field(p(0)).field(p(1)).end_row();
  m.outputs.push_back("kappa_zero_curve.csv");
  m.results = {{"polarization", r.polarization}, {"snapshots", snaps}};
  m.write(ctx.out_dir);
  const auto& last = r.snapshots.back();
  log(ctx) << "envelope: T = " << last.T << ", near-curve fraction " << last.near_curve_fraction
           << ", boundary fraction " << last.boundary_fraction << '\n';
  return kOk;
}

int cmd_edge(const RunContext& ctx) {
  const EdgeSection& e = ctx.config.edge;
  EdgeProblem p;
  p.Kv = e.Kv;
  p.L_zeta = e.L_zeta;
  p.n_zeta = e.n_zeta;
  p.kappa = {WallProfile::Kind::Tanh, e.kappa_inf};
  const EdgeSpectrum sp = edge_dispersion_sweep(p, e.k_par, e.c, e.m, e.count, ctx.workers);

  CsvWriter disp(ctx.out_dir / "edge_dispersion.csv");
  disp.header({"k_par", "rank", "mu", "in_gap", "decays"});
  for (std::size_t i = 0; i < sp.k_par.size(); ++i)
    for (std::size_t r = 0; r < sp.modes[i].size(); ++r) {
      const EdgeMode& md = sp.modes[i][r];
      disp.field(md.k_par)
          .field(static_cast<long long>(r))
          .field(md.mu)
          .field(md.in_gap ? 1 : 0)
          .field(md.decays ? 1 : 0)
          .end_row();
    }

  // Zero mode at k∥ = 0 against the closed form.
  const EdgeSpectrum z = edge_dispersion_sweep(p, {0.0}, e.c, e.m, 1, 1);
  const EdgeMode& zm = z.modes[0][0];
  const CVector exact = zero_mode_analytic(p, e.c, e.m);
  const EdgeGrid g = edge_grid(p);
  const cplx ov = exact.dot(zm.beta) * g.h;
  const CVector aligned = zm.beta * std::polar(1.0, -std::arg(ov));
  const double err = edge_norm(aligned - exact, g.h);
  CsvWriter zc(ctx.out_dir / "edge_zero_mode.csv");
  zc.header({"zeta1", "zeta2", "beta1_re", "beta1_im", "beta2_re", "beta2_im", "exact1_re", "exact1_im", "exact2_re",
             "exact2_im"});
  for (int j = 0; j < p.n_zeta; ++j) {
    const auto k = static_cast<std::size_t>(j);
    zc.field(g.zeta1[k])
        .field(g.zeta2[k])
        .field(aligned(2 * j).real())
        .field(aligned(2 * j).imag())
        .field(aligned(2 * j + 1).real())
        .field(aligned(2 * j + 1).imag())
        .field(exact(2 * j).real())
        .field(exact(2 * j).imag())
        .field(exact(2 * j + 1).real())
        .field(exact(2 * j + 1).imag())
        .end_row();
  }

  Manifest m = start_manifest(ctx, "edge");
  m.outputs = {"edge_dispersion.csv", "edge_zero_mode.csv"};
  m.results = {{"gap_edge", sp.gap_edge}, {"zero_mode_mu", zm.mu}, {"zero_mode_error", err}};
  if (std::abs(zm.mu) > 1e-6 || err > 1e-6)
    m.warnings.push_back("zero mode residual above 1e-6; refine edge.n_zeta or widen edge.L_zeta");
  m.write(ctx.out_dir);
  log(ctx) << "edge: zero mode mu = " << zm.mu << ", L2 error vs closed form " << err << '\n';
  return kOk;
}

int cmd_validate(const RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const PeriodicMatrixField A = c.make_A();
  const PeriodicMatrixField B = c.make_B();
  const DiracData d = analyze_dirac_point(A, B, c.dirac_options());
  ScalingConfig cfg = c.wave;
  cfg.workers = ctx.workers;
  const ScalingResult r = run_scaling_experiment(A, B, d, cfg);

  Manifest m = start_manifest(ctx, "validate");
  CsvWriter csv(ctx.out_dir / "scaling.csv");
  csv.header({"kind", "epsilon", "P", "N", "dt", "steps", "t_end", "psi_norm", "initial_residual", "sup_H0", "sup_H1",
              "energy_drift"});
  json rows = json::array();
  for (const ScalingRow& row : r.rows) {
    csv.field("run")
        .field(row.epsilon)
        .field(row.P)
        .field(row.N)
        .field(row.dt)
        .field(static_cast<long long>(row.steps))
        .field(row.t_end)
        .field(row.psi_norm)
        .field(row.initial_residual)
        .field(row.sup_h0)
        .field(row.sup_h1)
        .field(row.energy_drift)
        .end_row();
    char tag[32];
    std::snprintf(tag, sizeof tag, "%g", row.epsilon);
    const std::string name = std::string("residual_eps") + tag + ".csv";
    CsvWriter ts(ctx.out_dir / name);
    ts.header({"t", "H0", "H1", "energy"});
    for (const auto& s : row.series) ts.field(s.t).field(s.h0).field(s.h1).field(s.energy).end_row();
    m.outputs.push_back(name);
    rows.push_back({{"epsilon", row.epsilon}, {"sup_H0", row.sup_h0}, {"sup_H1", row.sup_h1}});
  }
  if (r.has_fit) {
    csv.field("slope").field("").field("").field("").field("").field("").field("").field("").field("");
    csv.field(r.slope_h0).field(r.slope_h1).field("").end_row();
  }
  m.outputs.insert(m.outputs.begin(), "scaling.csv");

  std::string verdict;
  int code = kOk;
  if (!r.has_fit) {
    verdict = "INFO validate: single epsilon, no slope fitted";
  } else {
    const double slope = cfg.s == 0 ? r.slope_h0 : r.slope_h1;
    const bool pass = cfg.massless ? r.monotone : (r.monotone && slope >= 0.8);
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " validate: slope " << slope << (cfg.massless ? " (monotone check)" : " >= 0.8")
       << ", monotone " << (r.monotone ? "yes" : "no");
    verdict = os.str();
    code = pass ? kOk : kInvariantFailure;
    m.results["slope_H0"] = r.slope_h0;
    m.results["slope_H1"] = r.slope_h1;
  }
  m.results["rows"] = rows;
  m.results["monotone"] = r.monotone;
  m.results["verdict"] = verdict;
  m.write(ctx.out_dir);
  log(ctx) << verdict << '\n';
  return code;
}

int cmd_decompose(const RunContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const DecomposeSection& s = c.decompose;
  const PeriodicMatrixField A = c.make_A();
  const SpectralGrid fine = supercell_grid(A.lattice(), s.P, s.n);
  Manifest m = start_manifest(ctx, "decompose");

  ComplexGrid f;
  if (!s.input.empty()) {
    const HgrFile h = read_hgr(fs::path(s.input));
    if (h.components.empty() || h.nx != static_cast<std::uint32_t>(fine.n1()) ||
        h.ny != static_cast<std::uint32_t>(fine.n2()))
      throw ConfigError("/decompose/input", "field does not match the P n x P n supercell grid");
    f = h.components[0];
  } else {
    if (s.P % 3 != 0) throw ConfigError("/decompose/P", "P must be a multiple of 3 to place K on the supercell grid");
    const DiracData d = analyze_dirac_point(A, c.make_B(), c.dirac_options());
    EnvelopeField env(slow_grid_for(A.lattice(), s.P, s.P, s.epsilon));
    const Vec2 centre = 0.5 * s.epsilon * s.P * (A.lattice().v1 + A.lattice().v2);
    const double w2 = s.envelope_width * s.envelope_width;
    env.fill([&](const Vec2& X) {
      const cplx g = std::exp(-(X - centre).squaredNorm() / w2);
      return CVec2(g, g);
    });
    f = make_wavepacket_initial(d, env, s.epsilon, fine, s.P).first;
  }

  const BlochDecomposition dec = bloch_decompose(f, A, s.P, s.n, s.n_bands, ctx.workers);
  const ComplexGrid back = bloch_reconstruct(dec);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num += std::norm(back[i] - f[i]);
    den += std::norm(f[i]);
  }
  const double l2 = l2_norm(fine, f);
  const double parseval = dec.parseval_sum();
  const double near_radius = 10.0 * s.epsilon;
  double near = 0.0;
  double total = 0.0;

  CsvWriter csv(ctx.out_dir / "decompose.csv");
  csv.header({"j1", "j2", "kx", "ky", "band", "energy", "coef_re", "coef_im"});
  for (std::size_t k = 0; k < dec.k_points.size(); ++k) {
    const bool close = A.lattice().dual_distance(dec.k_points[k], A.lattice().K) <= near_radius ||
                       A.lattice().dual_distance(dec.k_points[k], A.lattice().Kp) <= near_radius;
    for (std::size_t b = 0; b < dec.modes[k].size(); ++b) {
      const cplx v = dec.coefficients(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
      total += std::norm(v);
      if (close) near += std::norm(v);
      csv.field(dec.k_indices[k][0])
          .field(dec.k_indices[k][1])
          .field(dec.k_points[k](0))
          .field(dec.k_points[k](1))
          .field(static_cast<int>(b) + 1)
          .field(dec.modes[k][b].energy)
          .field(v.real())
          .field(v.imag())
          .end_row();
    }
  }
  m.outputs = {"decompose.csv"};
  m.results = {{"l2_norm_squared", l2 * l2},
               {"parseval_sum", parseval},
               {"parseval_relative_error", den > 0.0 ? std::abs(parseval - l2 * l2) / (l2 * l2) : 0.0},
               {"round_trip_relative_error", den > 0.0 ? std::sqrt(num / den) : 0.0},
               {"mass_fraction_near_dirac_points", total > 0.0 ? near / total : 0.0}};
  m.write(ctx.out_dir);
  log(ctx) << "decompose: Parseval sum " << parseval << " vs ||f||^2 " << l2 * l2 << '\n';
  return kOk;
}

int run_command(const std::string& name, const fs::path& config_path, const std::optional<fs::path>& out_dir,
                int workers, std::optional<std::uint64_t> seed, std::ostream& log_out, std::ostream& err) {
  try {
    RunContext ctx;
    ctx.config = load_config(config_path);
    validate_config(ctx.config);
    if (workers < 1) throw ConfigError("--workers", "must be at least 1");
    ctx.out_dir = out_dir ? *out_dir : fs::path(ctx.config.output_directory);
    ctx.workers = workers;
    ctx.seed = seed;
    ctx.log = &log_out;
    if (out_dir) ctx.config.output_directory = out_dir->string();
    // Weights are built once up front so that their preconditions fail before any output exists.
    (void)ctx.config.make_A();
    (void)ctx.config.make_B();
    fs::create_directories(ctx.out_dir);
    if (name == "bands") return cmd_bands(ctx);
    if (name == "dirac") return cmd_dirac(ctx);
    if (name == "envelope") return cmd_envelope(ctx);
    if (name == "edge") return cmd_edge(ctx);
    if (name == "validate") return cmd_validate(ctx);
    if (name == "decompose") return cmd_decompose(ctx);
    err << "unknown command '" << name << "'\n";
    return kConfigError;
  } catch (const ResourceRefusal& e) {
    err << "resource refusal: " << e.what() << '\n';
    return kResourceRefusal;
  } catch (const InvariantViolation& e) {
    err << "invariant failure: " << e.what() << '\n';
    return kInvariantFailure;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace hexwave::cli

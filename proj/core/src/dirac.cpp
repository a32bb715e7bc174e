// SPDX-License-Identifier: Apache-2.0
#include "hexwave/dirac.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hexwave/error.hpp"
#include "hexwave/linalg.hpp"
#include "hexwave/parallel.hpp"

namespace hexwave {

namespace {

cplx l2_inner(const LatticeSpec& lat, const CVector& f, const CVector& g) { return lat.cell_area * f.dot(g); }

double l2_norm_coeffs(const LatticeSpec& lat, const CVector& f) { return std::sqrt(lat.cell_area) * f.norm(); }

// Apply x -> R* x to a K-quasi-periodic coefficient vector.
CVector rotate_coeffs(const RotationIndexMap& map, const CVector& c) {
  CVector out = CVector::Zero(c.size());
  for (std::size_t i = 0; i < map.target.size(); ++i)
    if (map.target[i]) out(static_cast<Eigen::Index>(*map.target[i])) = c(static_cast<Eigen::Index>(i));
  return out;
}

// Sign convention for the residual ±1 ambiguity: the first coefficient of
// (numerically) maximal magnitude gets a positive real part.
void fix_sign(CVector& a, CVector& b) {
  const double peak = a.cwiseAbs().maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i)) >= (1.0 - 1e-6) * peak) {
      pick = i;
      break;
    }
  }
  const cplx c = a(pick);
  const double key = std::abs(c.real()) > 1e-8 * peak ? c.real() : c.imag();
  if (key < 0.0) {
    a = -a;
    b = -b;
  }
}

std::string describe_energies(const Eigen::VectorXd& e) {
  std::ostringstream os;
  os.precision(12);
  for (Eigen::Index i = 0; i < e.size(); ++i) os << (i ? ", " : "") << e(i);
  return os.str();
}

}  // namespace

DiracEigenspace find_dirac_point(const PeriodicMatrixField& A, int truncation, double tol_deg, int n_scan) {
  if (tol_deg < 0.0) throw InvalidArgument("find_dirac_point: tol_deg must be non-negative");
  if (n_scan < 3) throw InvalidArgument("find_dirac_point: n_scan must be at least 3");
  const LatticeSpec& lat = A.lattice();
  PlaneWaveBasis basis(lat, truncation);
  n_scan = std::min<int>(n_scan, static_cast<int>(basis.size()));
  const auto modes = solve_bands(BlochProblem{A, lat.K, basis}, n_scan);

  Eigen::VectorXd e(n_scan);
  for (int b = 0; b < n_scan; ++b) e(b) = modes[b].energy;
  auto rel_gap = [&](int b) { return std::abs(e(b + 1) - e(b)) / std::max(std::abs(e(b)), 1e-300); };

  for (int b = 0; b + 1 < n_scan; ++b) {
    if (!(rel_gap(b) < tol_deg)) continue;
    if (b + 2 < n_scan && rel_gap(b + 1) < tol_deg)
      throw InvariantViolation("find_dirac_point: more than two-fold degeneracy at K (bands " + std::to_string(b + 1) +
                               ".." + std::to_string(b + 3) + ", energies " + describe_energies(e.head(b + 3)) +
                               "); the weight is not generic, e.g. the free medium");
    if (b + 2 >= n_scan)
      throw InvariantViolation("find_dirac_point: degenerate pair at the top of the scanned range; increase n_scan");
    DiracEigenspace out{basis, lat.K, b + 1, 0.5 * (e(b) + e(b + 1)), rel_gap(b), 0.0, e, modes[b].coeffs,
                        modes[b + 1].coeffs};
    double margin = std::numeric_limits<double>::infinity();
    for (int o = 0; o < n_scan; ++o)
      if (o != b && o != b + 1) margin = std::min(margin, std::abs(e(o) - out.E_D));
    out.gap_margin = margin;
    return out;
  }
  throw InvariantViolation("find_dirac_point: no degeneracy found at K among the lowest " + std::to_string(n_scan) +
                           " bands (energies " + describe_energies(e) + "); the weight is likely non-generic");
}

std::array<CVector, 2> apply_current(const PeriodicMatrixField& A, const PlaneWaveBasis& basis, const Vec2& k,
                                     const CVector& c) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::array<CVector, 2> out{CVector::Zero(n), CVector::Zero(n)};
  const auto& field_basis = A.basis();
  std::vector<Vec2> q(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) q[i] = k + basis.frequency(i);
  for (std::size_t s = 0; s < field_basis.size(); ++s) {
    const CMat2& a = A.coeffs()[s];
    if (a.isZero(0.0)) continue;
    const MillerIndex d = field_basis[s];
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto j = basis.index_of(basis[i].m1 - d.m1, basis[i].m2 - d.m2);
      if (!j) continue;
      // (1/i)[i Â q_j + i Â^T q_i] c_j
      const CVec2 v = (a * q[*j].cast<cplx>() + a.transpose() * q[i].cast<cplx>()) * c(static_cast<Eigen::Index>(*j));
      out[0](static_cast<Eigen::Index>(i)) += v(0);
      out[1](static_cast<Eigen::Index>(i)) += v(1);
    }
  }
  return out;
}

CVec2 current_inner(const PeriodicMatrixField& A, const PlaneWaveBasis& basis, const Vec2& k, const CVector& f,
                    const CVector& g) {
  const auto ag = apply_current(A, basis, k, g);
  const LatticeSpec& lat = basis.lattice();
  return CVec2(l2_inner(lat, f, ag[0]), l2_inner(lat, f, ag[1]));
}

GaugePair fix_gauge(const PlaneWaveBasis& basis, const Vec2& K, const CVector& u, const CVector& w,
                    const PeriodicMatrixField& A) {
  const LatticeSpec& lat = basis.lattice();
  const RotationIndexMap map = rotate_index_map(basis, K);
  const std::array<const CVector*, 2> vs = {&u, &w};
  Eigen::Matrix2cd rot;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) rot(i, j) = l2_inner(lat, *vs[i], rotate_coeffs(map, *vs[j]));
  }
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(rot);
  const cplx tau = std::polar(1.0, 2.0 * kPi / 3.0);

  GaugePair g;
  g.rotation_eigenvalues = {es.eigenvalues()(0), es.eigenvalues()(1)};
  const int it = std::abs(es.eigenvalues()(0) - tau) <= std::abs(es.eigenvalues()(1) - tau) ? 0 : 1;
  g.rotation_error = std::max(std::abs(es.eigenvalues()(it) - tau), std::abs(es.eigenvalues()(1 - it) - std::conj(tau)));
  if (g.rotation_error > 1e-6) {
    std::ostringstream os;
    os << "fix_gauge: rotation eigenvalues " << es.eigenvalues()(0) << ", " << es.eigenvalues()(1)
       << " are not {tau, conj(tau)}; the weight violates the honeycomb symmetry";
    throw InvariantViolation(os.str());
  }
  const CVec2 v = es.eigenvectors().col(it);
  g.phi1 = v(0) * u + v(1) * w;
  g.phi1 /= l2_norm_coeffs(lat, g.phi1);
  g.phi2 = g.phi1.conjugate();

  const CVector proj = l2_inner(lat, u, g.phi2) * u + l2_inner(lat, w, g.phi2) * w;
  g.conjugate_residual = l2_norm_coeffs(lat, g.phi2 - proj);
  if (g.conjugate_residual > 1e-8)
    throw InvariantViolation("fix_gauge: conj(Phi1(-x)) is not in the eigenspace (residual " +
                             std::to_string(g.conjugate_residual) + "); the degeneracy is accidental");

  CVec2 a12 = current_inner(A, basis, K, g.phi1, g.phi2);
  // a12 = λ(1, ±i); the -i case means the labels are the other way round.
  if (std::abs(a12(1) + kI * a12(0)) < std::abs(a12(1) - kI * a12(0))) {
    std::swap(g.phi1, g.phi2);
    g.swapped = true;
    a12 = current_inner(A, basis, K, g.phi1, g.phi2);
  }
  const double gamma = 0.5 * std::arg(a12(0));
  const cplx phase = std::polar(1.0, gamma);
  g.phi1 *= phase;
  g.phi2 *= std::conj(phase);
  fix_sign(g.phi1, g.phi2);
  return g;
}

CurrentIdentities compute_vf_inner(const PlaneWaveBasis& basis, const Vec2& K, const CVector& phi1,
                                   const CVector& phi2, const PeriodicMatrixField& A) {
  CurrentIdentities r;
  r.a11 = current_inner(A, basis, K, phi1, phi1);
  r.a12 = current_inner(A, basis, K, phi1, phi2);
  r.a21 = current_inner(A, basis, K, phi2, phi1);
  r.a22 = current_inner(A, basis, K, phi2, phi2);
  r.v_F = r.a12(0).real();
  const CVec2 e12(r.v_F, kI * r.v_F);
  const CVec2 e21(r.v_F, -kI * r.v_F);
  r.max_residual = std::max({r.a11.cwiseAbs().maxCoeff(), r.a22.cwiseAbs().maxCoeff(),
                             (r.a12 - e12).cwiseAbs().maxCoeff(), (r.a21 - e21).cwiseAbs().maxCoeff()});
  return r;
}

MassIdentities compute_theta_sharp(const PlaneWaveBasis& basis, const Vec2& K, const CVector& phi1,
                                   const CVector& phi2, const PeriodicMatrixField& B) {
  const LatticeSpec& lat = basis.lattice();
  const CMatrix h = assemble_form_matrix(B, basis, K);
  MassIdentities m;
  m.b11 = l2_inner(lat, phi1, h * phi1);
  m.b12 = l2_inner(lat, phi1, h * phi2);
  m.b21 = l2_inner(lat, phi2, h * phi1);
  m.b22 = l2_inner(lat, phi2, h * phi2);
  m.theta_sharp = m.b11.real();
  m.max_residual = std::max({std::abs(m.b11.imag()), std::abs(m.b11 + m.b22), std::abs(m.b12), std::abs(m.b21)});
  m.degenerate = std::abs(m.theta_sharp) < 1e-8;
  return m;
}

double DiracData::kinetic_coefficient() const { return v_F() / (2.0 * std::sqrt(E_D())); }
double DiracData::mass_coefficient() const { return theta_sharp() / (2.0 * std::sqrt(E_D())); }

DiracData analyze_dirac_point(const PeriodicMatrixField& A, const PeriodicMatrixField& B, const DiracOptions& options) {
  if (options.q0_factor <= 0.0) throw InvalidArgument("analyze_dirac_point: q0 factor must be positive");
  DiracData d{find_dirac_point(A, options.truncation, options.tol_deg, options.n_scan), {}, {}, {}, options.tol_deg,
              options.q0_factor * A.lattice().K.norm()};
  d.gauge = fix_gauge(d.point.basis, d.point.K, d.point.u, d.point.w, A);
  d.current = compute_vf_inner(d.point.basis, d.point.K, d.gauge.phi1, d.gauge.phi2, A);
  d.mass = compute_theta_sharp(d.point.basis, d.point.K, d.gauge.phi1, d.gauge.phi2, B);
  return d;
}

namespace {

// Least squares y ≈ a1 r + a2 r²; returns (a1, a2, max |misfit|).
std::array<double, 3> fit_linear_quadratic(const std::vector<double>& r, const Eigen::VectorXd& y) {
  const auto n = static_cast<Eigen::Index>(r.size());
  Eigen::MatrixXd m(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = r[static_cast<std::size_t>(i)];
    m(i, 1) = r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
  }
  if (n == 1) {
    return {y(0) / r[0], 0.0, 0.0};
  }
  const Eigen::Vector2d a = m.colPivHouseholderQr().solve(y);
  return {a(0), a(1), (m * a - y).cwiseAbs().maxCoeff()};
}

}  // namespace

ConicalFit conical_fit(const PeriodicMatrixField& A, const DiracData& dirac, const std::vector<double>& radii,
                       const std::vector<Vec2>& directions, int workers) {
  if (radii.empty() || directions.empty()) throw InvalidArgument("conical_fit: radii and directions must be nonempty");
  for (double r : radii)
    if (!(r > 0.0) || r > dirac.q0 * (1.0 + 1e-12))
      throw InvalidArgument("conical_fit: radii must lie in (0, q0]");
  ConicalFit fit;
  fit.radii = radii;
  for (const Vec2& d : directions) {
    if (d.norm() == 0.0) throw InvalidArgument("conical_fit: zero direction");
    fit.directions.push_back(d.normalized());
  }
  const auto nd = static_cast<Eigen::Index>(fit.directions.size());
  const auto nr = static_cast<Eigen::Index>(radii.size());
  fit.e_plus.resize(nd, nr);
  fit.e_minus.resize(nd, nr);
  const int b = dirac.point.b_star - 1;
  parallel_for(static_cast<std::size_t>(nd * nr), workers, [&](std::size_t idx) {
    const auto id = static_cast<Eigen::Index>(idx) / nr;
    const auto ir = static_cast<Eigen::Index>(idx) % nr;
    const Vec2 k = dirac.point.K + radii[static_cast<std::size_t>(ir)] * fit.directions[static_cast<std::size_t>(id)];
    const auto modes = solve_bands(BlochProblem{A, k, dirac.point.basis}, b + 2);
    fit.e_minus(id, ir) = modes[static_cast<std::size_t>(b)].energy;
    fit.e_plus(id, ir) = modes[static_cast<std::size_t>(b + 1)].energy;
  });

  const double ed = dirac.E_D();
  const double vf = dirac.v_F();
  fit.residual_plus.resize(nd, nr);
  fit.residual_minus.resize(nd, nr);
  const auto smallest = static_cast<Eigen::Index>(std::min_element(radii.begin(), radii.end()) - radii.begin());
  const double rmax = *std::max_element(radii.begin(), radii.end());
  for (Eigen::Index id = 0; id < nd; ++id) {
    const Eigen::VectorXd up = fit.e_plus.row(id).transpose().array() - ed;
    const Eigen::VectorXd down = fit.e_minus.row(id).transpose().array() - ed;
    const auto fp = fit_linear_quadratic(radii, up);
    const auto fm = fit_linear_quadratic(radii, down);
    const auto fs = fit_linear_quadratic(radii, up + down);
    fit.slopes_plus.push_back(fp[0]);
    fit.slopes_minus.push_back(-fm[0]);
    fit.sum_linear.push_back(fs[0]);
    fit.max_fit_residual = std::max({fit.max_fit_residual, fp[2], fm[2]});
    fit.small_radius_slopes.push_back((fit.e_plus(id, smallest) - fit.e_minus(id, smallest)) /
                                      (2.0 * radii[static_cast<std::size_t>(smallest)]));
    for (Eigen::Index ir = 0; ir < nr; ++ir) {
      const double r = radii[static_cast<std::size_t>(ir)];
      fit.residual_plus(id, ir) = up(ir) / (vf * r) - 1.0;
      fit.residual_minus(id, ir) = down(ir) / (-vf * r) - 1.0;
      fit.residual_constant = std::max(
          fit.residual_constant, std::max(std::abs(fit.residual_plus(id, ir)), std::abs(fit.residual_minus(id, ir))) / r);
    }
    if (fp[0] <= 0.0 || fm[0] >= 0.0)
      throw InvariantViolation("conical_fit: not conical at this point (non-positive slope)");
  }
  if (fit.max_fit_residual > 1e-2 * vf * rmax)
    throw InvariantViolation("conical_fit: not conical at this point (fit residual " +
                             std::to_string(fit.max_fit_residual) + ")");
  return fit;
}

ModeExpansionReport check_mode_expansion(const PeriodicMatrixField& A, const DiracData& dirac, const Vec2& kappa) {
  const double r = kappa.norm();
  if (!(r > 0.0)) throw InvalidArgument("check_mode_expansion: kappa must be nonzero");
  const LatticeSpec& lat = A.lattice();
  const int b = dirac.point.b_star - 1;
  const auto modes = solve_bands(BlochProblem{A, dirac.point.K + kappa, dirac.point.basis}, b + 2);
  const cplx eta(kappa(0) / r, kappa(1) / r);
  const CVector plus = (eta * dirac.phi1() + dirac.phi2()) / std::sqrt(2.0);
  const CVector minus = (eta * dirac.phi1() - dirac.phi2()) / std::sqrt(2.0);
  ModeExpansionReport rep;
  rep.kappa = kappa;
  rep.overlap_plus = std::abs(l2_inner(lat, plus, modes[static_cast<std::size_t>(b + 1)].coeffs));
  rep.overlap_minus = std::abs(l2_inner(lat, minus, modes[static_cast<std::size_t>(b)].coeffs));
  const double worst = std::min(rep.overlap_plus, rep.overlap_minus);
  rep.deficit = std::sqrt(std::max(0.0, 2.0 - 2.0 * worst));
  return rep;
}

double isolation_margin(const PeriodicMatrixField& A, const DiracData& dirac, double q1, int rings, int per_ring,
                        int workers) {
  if (!(q1 > 0.0) || rings < 1 || per_ring < 1) throw InvalidArgument("isolation_margin: bad sampling parameters");
  std::vector<Vec2> ks{dirac.point.K};
  for (int i = 1; i <= rings; ++i)
    for (int j = 0; j < per_ring; ++j) {
      const double th = 2.0 * kPi * (j + 0.5 * (i % 2)) / per_ring;
      ks.push_back(dirac.point.K + (q1 * i / rings) * Vec2(std::cos(th), std::sin(th)));
    }
  const int b = dirac.point.b_star - 1;
  const int count = std::min<int>(b + 3, static_cast<int>(dirac.point.basis.size()));
  std::vector<double> best(ks.size(), std::numeric_limits<double>::infinity());
  parallel_for(ks.size(), workers, [&](std::size_t i) {
    const auto modes = solve_bands(BlochProblem{A, ks[i], dirac.point.basis}, count);
    for (int o = 0; o < count; ++o)
      if (o != b && o != b + 1) best[i] = std::min(best[i], std::abs(modes[static_cast<std::size_t>(o)].energy - dirac.E_D()));
  });
  return *std::min_element(best.begin(), best.end());
}

namespace {

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }
nlohmann::json cjson(const CVec2& v) { return nlohmann::json::array({cjson(v(0)), cjson(v(1))}); }

}  // namespace

nlohmann::json to_json(const DiracData& d) {
  nlohmann::json j;
  j["K"] = {d.point.K(0), d.point.K(1)};
  j["E_D"] = d.E_D();
  j["b_star"] = d.point.b_star;
  j["truncation"] = d.point.basis.truncation();
  j["relative_gap"] = d.point.relative_gap;
  j["gap_margin"] = d.point.gap_margin;
  j["tol_deg"] = d.tol_deg;
  j["q0"] = d.q0;
  j["energies_at_K"] = std::vector<double>(d.point.energies.data(), d.point.energies.data() + d.point.energies.size());
  j["v_F"] = d.v_F();
  j["theta_sharp"] = d.theta_sharp();
  j["theta_sharp_sign"] = d.theta_sharp() > 0.0 ? 1 : (d.theta_sharp() < 0.0 ? -1 : 0);
  j["kinetic_coefficient"] = d.kinetic_coefficient();
  j["mass_coefficient"] = d.mass_coefficient();
  j["gauge"] = {{"rotation_eigenvalues", {cjson(d.gauge.rotation_eigenvalues[0]), cjson(d.gauge.rotation_eigenvalues[1])}},
                {"rotation_error", d.gauge.rotation_error},
                {"conjugate_residual", d.gauge.conjugate_residual},
                {"swapped_labels", d.gauge.swapped}};
  j["current_identities"] = {{"phi1_A_phi1", cjson(d.current.a11)},
                             {"phi1_A_phi2", cjson(d.current.a12)},
                             {"phi2_A_phi1", cjson(d.current.a21)},
                             {"phi2_A_phi2", cjson(d.current.a22)},
                             {"max_residual", d.current.max_residual}};
  j["mass_identities"] = {{"phi1_LB_phi1", cjson(d.mass.b11)},
                          {"phi1_LB_phi2", cjson(d.mass.b12)},
                          {"phi2_LB_phi1", cjson(d.mass.b21)},
                          {"phi2_LB_phi2", cjson(d.mass.b22)},
                          {"max_residual", d.mass.max_residual},
                          {"degenerate", d.mass.degenerate}};
  return j;
}

nlohmann::json to_json(const ConicalFit& fit) {
  nlohmann::json j;
  j["radii"] = fit.radii;
  nlohmann::json dirs = nlohmann::json::array();
  for (const auto& d : fit.directions) dirs.push_back({d(0), d(1)});
  j["directions"] = dirs;
  j["slopes_plus"] = fit.slopes_plus;
  j["slopes_minus"] = fit.slopes_minus;
  j["sum_linear"] = fit.sum_linear;
  j["small_radius_slopes"] = fit.small_radius_slopes;
  j["residual_constant"] = fit.residual_constant;
  j["max_fit_residual"] = fit.max_fit_residual;
  return j;
}

}  // namespace hexwave

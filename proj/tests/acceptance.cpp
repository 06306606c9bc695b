// acceptance checklist: one numbered criterion per invocation.
// usage: hyperspin_acceptance <1..10> <cli-path> <data-dir>
// prints one [ OK ]/[FAIL] line per clause with the measured values, then a
// final "criterion N: PASS|FAIL" verdict; exit 0 iff every clause holds.
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/branching.hpp"
#include "core/euler.hpp"
#include "core/fitting.hpp"
#include "core/model.hpp"
#include "core/perturb.hpp"
#include "core/spectra.hpp"
#include "core/spinops.hpp"
#include "core/symmetry.hpp"
#include "core/tensor.hpp"
#include "oracle_jacobi.hpp"

using namespace hs;

namespace {

struct Checker {
  bool all = true;
  void clause(bool ok, const char* fmt, ...) {
    all = all && ok;
    std::va_list ap;
    va_start(ap, fmt);
    std::printf("  [%s] ", ok ? " OK " : "FAIL");
    std::vprintf(fmt, ap);
    std::printf("\n");
    va_end(ap);
  }
};

// the published parameter set at printed precision; the ground quadrupole
// angles were printed twice with different rounding (parameter table vs
// orientation table) — pick per use
model::SiteModel literal_model(bool orientation_precision) {
  model::SiteModel m;
  m.ground.d_mhz = -12.3797;
  m.ground.e_mhz = -2.735;
  m.ground.q_abg_deg =
      orientation_precision ? Vec3{-29.90, 53.48, 124.05} : Vec3{-29.9, 53.4, 124.05};
  m.ground.g_mhz_per_t = {4.30, 5.559, -10.891};
  m.ground.m_abg_deg = {105.25, 163.74, 124.56};
  m.excited.d_mhz = 27.26;
  m.excited.e_mhz = 5.85;
  m.excited.q_abg_deg = {165.2982, 154.9117, 107.8092};
  m.excited.g_mhz_per_t = {9.11, 9.158, 9.069};
  m.excited.m_abg_deg = {70.53, 5.0, 62.17};
  m.frame_abg_deg = {-140.0, 172.0, -51.0};
  return m;
}

// published crystal-frame reference matrices (ground/excited quadrupole and
// Zeeman tensors of subsite 1)
Mat3 mat3(std::initializer_list<double> v) {
  Mat3 m;
  int i = 0;
  for (double x : v) m(i / 3, i % 3) = x, ++i;
  return m;
}
const Mat3 kQ1gRef = mat3({-3.0685, -2.4714, 6.7354, -2.4714, -4.2007, 2.4588, 6.7354, 2.4588,
                           -5.1106});
const Mat3 kM1gRef = mat3({3.8330, -0.8958, -4.7029, -0.8958, 3.3680, -3.7497, -4.7029, -3.7497,
                           -8.2410});
const Mat3 kQ1eRef = mat3({4.8095, -1.5956, 13.0154, -1.5956, 4.3611, 7.0101, 13.0154, 7.0101,
                           18.0894});
const Mat3 kM1eRef = mat3({9.1340, -0.0248, 0.0032, -0.0248, 9.1347, -0.0092, 0.0032, -0.0092,
                           9.0713});

// worst entry deviation of the four crystal-frame tensors from the reference
// matrices, with optional transposed compositions (the convention candidates)
double golden_maxdev(const model::SiteModel& m, bool tensor_transpose, bool frame_transpose) {
  const Mat3 rt = euler::rotation(m.frame_abg_deg);
  struct Item {
    Vec3 pv, abg;
    const Mat3* ref;
  };
  const Item items[4] = {
      {{-m.ground.e_mhz, m.ground.e_mhz, m.ground.d_mhz}, m.ground.q_abg_deg, &kQ1gRef},
      {m.ground.g_mhz_per_t, m.ground.m_abg_deg, &kM1gRef},
      {{-m.excited.e_mhz, m.excited.e_mhz, m.excited.d_mhz}, m.excited.q_abg_deg, &kQ1eRef},
      {m.excited.g_mhz_per_t, m.excited.m_abg_deg, &kM1eRef}};
  double worst = 0;
  for (const auto& it : items) {
    const Mat3 r = euler::rotation(it.abg);
    const Mat3 x = tensor_transpose
                       ? Mat3(r.transpose() * it.pv.asDiagonal() * r)
                       : Mat3(r * it.pv.asDiagonal() * r.transpose());
    const Mat3 cry = frame_transpose ? Mat3(rt.transpose() * x * rt) : Mat3(rt * x * rt.transpose());
    worst = std::max(worst, (cry - *it.ref).cwiseAbs().maxCoeff());
  }
  return worst;
}

Vec6 eigvals(const Mat6c& h) {
  return Eigen::SelfAdjointEigenSolver<Mat6c>(h).eigenvalues();
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  while (v.norm() < 1e-6) v = {n(rng), n(rng), n(rng)};
  return v.normalized();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return in ? ss.str() : std::string("<unreadable:" + path + ">");
}

std::string g_model_path;

// ---------------------------------------------------------------- criteria

bool zero_field_gaps(int target, const model::SiteModel& m, double want_lo, double want_hi) {
  Checker c;
  const auto& st = m.state(target);
  const Mat3 q = tensor::quadrupole(st.d_mhz, st.e_mhz, Vec3::Zero());
  const auto ls = spinops::levels(spinops::hamiltonian(q, Mat3::Zero(), Vec3::Zero()));
  double lo = ls.gap_mhz[0], hi = ls.gap_mhz[1];
  if (lo > hi) std::swap(lo, hi);
  c.clause(std::abs(lo - want_lo) / want_lo < 0.01, "gap %.3f MHz vs %.2f (|rel| %.4f%%)", lo,
           want_lo, 100 * std::abs(lo - want_lo) / want_lo);
  c.clause(std::abs(hi - want_hi) / want_hi < 0.01, "gap %.3f MHz vs %.2f (|rel| %.4f%%)", hi,
           want_hi, 100 * std::abs(hi - want_hi) / want_hi);
  return c.all;
}

bool golden_matrices(const model::SiteModel& data) {
  Checker c;
  // stage 1: the printed values identify the composition convention uniquely
  const auto lit = literal_model(false);
  const double dev = golden_maxdev(lit, false, false);
  c.clause(dev < 0.2, "printed values under pinned convention: max dev %.4f < 0.2", dev);
  const double alt1 = golden_maxdev(lit, true, false);
  const double alt2 = golden_maxdev(lit, false, true);
  const double alt3 = golden_maxdev(lit, true, true);
  c.clause(std::min({alt1, alt2, alt3}) > 0.4,
           "transposed alternatives clearly worse: %.3f / %.3f / %.3f all > 0.4", alt1, alt2,
           alt3);

  // stage 2: the refined model file reproduces every entry to +-0.01
  double rdev = 0;
  rdev = std::max(rdev, (symmetry::to_crystal_frame(data.ground.Q(), data.frame_abg_deg) -
                         kQ1gRef).cwiseAbs().maxCoeff());
  rdev = std::max(rdev, (symmetry::to_crystal_frame(data.ground.M(), data.frame_abg_deg) -
                         kM1gRef).cwiseAbs().maxCoeff());
  rdev = std::max(rdev, (symmetry::to_crystal_frame(data.excited.Q(), data.frame_abg_deg) -
                         kQ1eRef).cwiseAbs().maxCoeff());
  rdev = std::max(rdev, (symmetry::to_crystal_frame(data.excited.M(), data.frame_abg_deg) -
                         kM1eRef).cwiseAbs().maxCoeff());
  c.clause(rdev <= 0.01, "refined model vs reference matrices: max entry dev %.6f <= 0.01", rdev);

  // every refined angle stays within its printed uncertainty of the printed value
  const double sig[15] = {0.3, 2.5, 0.86, 0.72, 0.61, 0.65, 0.07, 0.35,
                          0.45, 0.38, 0.2, 0.64, 4.0, 3.0, 0.5};
  double x0[15], x1[15];
  for (int i = 0; i < 3; ++i) {
    x0[i] = lit.ground.q_abg_deg[i];
    x1[i] = data.ground.q_abg_deg[i];
    x0[3 + i] = lit.ground.m_abg_deg[i];
    x1[3 + i] = data.ground.m_abg_deg[i];
    x0[6 + i] = lit.excited.q_abg_deg[i];
    x1[6 + i] = data.excited.q_abg_deg[i];
    x0[9 + i] = lit.excited.m_abg_deg[i];
    x1[9 + i] = data.excited.m_abg_deg[i];
    x0[12 + i] = lit.frame_abg_deg[i];
    x1[12 + i] = data.frame_abg_deg[i];
  }
  double worst_move = 0;
  for (int i = 0; i < 15; ++i) worst_move = std::max(worst_move, std::abs(x1[i] - x0[i]) / sig[i]);
  c.clause(worst_move <= 1.0, "largest refined-angle move %.3f of its printed uncertainty",
           worst_move);
  return c.all;
}

bool branching_selection(const model::SiteModel& m) {
  Checker c;
  const Mat3 calc = mat3({0.02, 0.18, 0.80, 0.12, 0.71, 0.17, 0.87, 0.10, 0.03});
  const Mat3 exp_t = mat3({0.03, 0.22, 0.75, 0.12, 0.68, 0.20, 0.85, 0.10, 0.05});
  const Mat3 t = branching::site_table(m);
  const double cdev = (t - calc).cwiseAbs().maxCoeff();
  c.clause(cdev <= 0.01, "computed table vs published computed table: max dev %.4f <= 0.01",
           cdev);

  const auto ranked = branching::select_solution(m, exp_t, 0.03, false);
  c.clause(ranked[0].ig == 0 && ranked[0].ie == 0,
           "best-ranked pairing is the published solution: got (ig=%d, ie=%d), dev %.4f",
           ranked[0].ig, ranked[0].ie, ranked[0].max_dev);
  int in_band = 0;
  for (const auto& p : ranked) in_band += p.in_band ? 1 : 0;
  // the published intensity table itself sits 0.05 from its own measured
  // column, so a +-0.03 band can never contain exactly one pairing; asserted
  // as written and expected to fail with in_band = 0
  c.clause(in_band == 1 && ranked[0].in_band,
           "exactly one pairing inside the +-0.03 band and it is the winner: %d in band",
           in_band);
  std::printf("  top of ranking (of %zu pairings):\n", ranked.size());
  for (size_t i = 0; i < 5 && i < ranked.size(); ++i)
    std::printf("    ig=%d ie=%d  max dev %.4f%s\n", ranked[i].ig, ranked[i].ie,
                ranked[i].max_dev, ranked[i].in_band ? "  (in band)" : "");
  return c.all;
}

bool orientation_rows(const model::SiteModel& /*data*/) {
  Checker c;
  // published orientation angles of the eight ground sign-family members,
  // keyed by the ABSOLUTE sign pattern of (g1, g2, g3)
  struct Row {
    std::array<int, 3> pat;
    Vec3 abg;
  };
  const Row rows[8] = {{{1, 1, 1}, {-149.96, 93.88, 124.10}},
                       {{-1, 1, 1}, {157.85, 95.76, 97.23}},
                       {{1, -1, 1}, {140.59, -124.22, 88.90}},
                       {{1, 1, -1}, {-29.90, 53.48, 124.05}},
                       {{-1, 1, -1}, {39.41, 55.78, 91.10}},
                       {{1, -1, -1}, {22.14, 84.24, -82.77}},
                       {{-1, -1, 1}, {-150.10, 126.52, -55.95}},
                       {{-1, -1, -1}, {-30.04, 86.12, -55.90}}};
  const auto lit = literal_model(true).ground;  // the published base solution
  const std::array<int, 3> base_pat{1, 1, -1};  // its absolute g signs

  const auto fam = symmetry::enumerate_solutions(lit.q_abg_deg, lit.d_mhz, lit.e_mhz,
                                                 lit.g_mhz_per_t, lit.m_abg_deg);
  double worst = 0;
  bool rows_ok = true;
  std::printf("  per-row best-alias deviation (deg):\n");
  for (const auto& v : fam) {
    std::array<int, 3> abs_pat{};
    for (int i = 0; i < 3; ++i) abs_pat[i] = v.pattern[i] * base_pat[i];
    const Row* want = nullptr;
    for (const auto& r : rows)
      if (r.pat == abs_pat) want = &r;
    const double dev = euler::alias_distance(v.q_abg_deg, want->abg, true);
    worst = std::max(worst, dev);
    rows_ok = rows_ok && dev <= 0.1;
    std::printf("    (%+d,%+d,%+d): computed (%8.3f, %7.3f, %8.3f) vs published "
                "(%8.2f, %7.2f, %8.2f)  dev %.3f\n",
                abs_pat[0], abs_pat[1], abs_pat[2], v.q_abg_deg[0], v.q_abg_deg[1],
                v.q_abg_deg[2], want->abg[0], want->abg[1], want->abg[2], dev);
  }
  // complement patterns are forced to identical quadrupole tensors, yet the
  // published rows for (+,-,+) and (-,+,-) disagree with each other — no
  // output can be within 0.1 deg of both
  const double mutual = euler::alias_distance(rows[2].abg, rows[4].abg, true);
  std::printf("  published complement rows (+,-,+)/(-,+,-) are mutually %.3f deg apart\n",
              mutual);
  c.clause(rows_ok, "all 8 rows within 0.1 deg of the published angles (worst %.3f)", worst);

  // spectrum equivalence across the family
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  const Mat3 q0 = lit.Q();
  const Mat3 m0 = lit.M();
  double wd = 0;
  for (int it = 0; it < 50; ++it) {
    const Vec3 b{u(rng), u(rng), u(rng)};
    const Vec6 e0 = eigvals(spinops::hamiltonian(q0, m0, b));
    for (const auto& v : fam) {
      const Vec6 e1 = eigvals(spinops::hamiltonian(v.Q, v.M, b));
      wd = std::max(wd, (e1 - e0).cwiseAbs().maxCoeff() * 1e3);
    }
  }
  c.clause(wd < 1e-6, "family spectrum equivalence over 50 random B: max |dE| %.2e kHz < 1e-6",
           wd);
  return c.all;
}

bool quenching(const model::SiteModel& m) {
  Checker c;
  const Vec3 ag = branching::quenching_alphas(m.ground.g_mhz_per_t);
  const Vec3 ae = branching::quenching_alphas(m.excited.g_mhz_per_t);
  const Vec3 want_g{0.59, 0.47, 2.03}, want_e{0.14, 0.13, 0.14};
  const double dg = (ag - want_g).cwiseAbs().maxCoeff();
  const double de = (ae - want_e).cwiseAbs().maxCoeff();
  c.clause(dg <= 0.01, "ground alphas (%.4f, %.4f, %.4f) vs (0.59, 0.47, 2.03): max dev %.4f",
           ag[0], ag[1], ag[2], dg);
  c.clause(de <= 0.01, "excited alphas (%.4f, %.4f, %.4f) vs (0.14, 0.13, 0.14): max dev %.4f",
           ae[0], ae[1], ae[2], de);
  return c.all;
}

double subsite_mismatch_khz(const model::SiteModel& m, const Vec3& b_mt) {
  const auto s = spectra::site_splittings(m, b_mt);
  double d = 0;
  for (int l = 0; l < 3; ++l) {
    d = std::max(d, std::abs(s.dg_khz[0][l] - s.dg_khz[1][l]));
    d = std::max(d, std::abs(s.de_khz[0][l] - s.de_khz[1][l]));
  }
  return d;
}

bool subsite_degeneracy(const model::SiteModel& m) {
  Checker c;
  const Vec3 n0 = m.c2_axis();
  c.clause(subsite_mismatch_khz(m, 10.0 * n0) < 1e-6,
           "B || symmetry axis: subsite mismatch %.2e kHz < 1e-6",
           subsite_mismatch_khz(m, 10.0 * n0));

  const Vec3 seed_v = std::abs(n0.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 u = n0.cross(seed_v).normalized();
  const Vec3 w = n0.cross(u);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(0.0, 2 * M_PI);
  double worst_plane = 0;
  for (int i = 0; i < 20; ++i) {
    const double t = th(rng);
    worst_plane = std::max(
        worst_plane, subsite_mismatch_khz(m, 10.0 * (std::cos(t) * u + std::sin(t) * w)));
  }
  c.clause(worst_plane < 1e-6, "20 in-plane directions: worst mismatch %.2e kHz < 1e-6",
           worst_plane);

  double min_generic = 1e30;
  int done = 0;
  while (done < 20) {
    const Vec3 n = random_unit(rng);
    const double a = std::abs(n.dot(n0));
    if (a < 0.2 || a > 0.95) continue;
    ++done;
    min_generic = std::min(min_generic, subsite_mismatch_khz(m, 10.0 * n));
  }
  c.clause(min_generic > 1.0, "20 generic directions at 10 mT: smallest mismatch %.3f kHz > 1",
           min_generic);
  return c.all;
}

bool perturbation_accuracy(const model::SiteModel& m) {
  Checker c;
  std::mt19937_64 rng(31);
  for (int target = 0; target < 2; ++target) {
    const auto& st = m.state(target);
    const auto sm = perturb::split_model(st.Q(), st.M());
    const auto pol = spinops::pair_of_label(st.Q());
    double worst_rel = 0, sum1 = 0, sum2 = 0;
    for (int i = 0; i < 100; ++i) {
      const Vec3 n = random_unit(rng);
      const auto ex1 = spinops::exact_split_khz(st.Q(), st.M(), n, pol);
      const auto pt1 = perturb::first_order_split_khz(sm, n);
      const auto ex2 = spinops::exact_split_khz(st.Q(), st.M(), 2.0 * n, pol);
      const auto pt2 = perturb::first_order_split_khz(sm, 2.0 * n);
      for (int l = 0; l < 3; ++l) {
        worst_rel = std::max(worst_rel, std::abs(pt1[l] - ex1[l]) / ex1[l]);
        sum1 += std::abs(pt1[l] - ex1[l]);
        sum2 += std::abs(pt2[l] - ex2[l]);
      }
    }
    c.clause(worst_rel < 0.01, "state %d: worst relative error at 1 mT %.4f%% < 1%%", target,
             100 * worst_rel);
    c.clause(sum2 / sum1 >= 3.5, "state %d: 2 mT / 1 mT summed-error ratio %.2f >= 3.5", target,
             sum2 / sum1);
  }
  return c.all;
}

bool fit_round_trip(const model::SiteModel& m) {
  Checker c;
  const auto scan = spectra::spiral_scan(10, 10, 5, 200);
  const std::vector<std::pair<int, int>> tr = {{0, 0}, {1, 1}, {2, 2}};
  const fitting::FitParams truth = fitting::params_of(m, 0);

  int good = 0;
  double worst_angle = 0, worst_g = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto obs = fitting::synth_observations(m, scan, tr, 1.0, seed);
    fitting::FitConfig cfg;
    cfg.target = 0;
    cfg.chains = 6;
    cfg.stop_rms_khz = 1.1;
    cfg.escalate_rms_khz = 4.0;
    cfg.seed = seed;
    const auto res = fitting::bootstrap_fit(m, obs, cfg);
    const auto gm = fitting::canonical_match(res.params, truth, m.ground.d_mhz, m.ground.e_mhz);
    const bool ok = gm.angle_dev_deg < 1.0 && gm.g_rel_dev < 0.02;
    good += ok ? 1 : 0;
    worst_angle = std::max(worst_angle, gm.angle_dev_deg);
    worst_g = std::max(worst_g, gm.g_rel_dev);
    std::printf("    seed %2llu: rms %.3f kHz, angle dev %.3f deg, g dev %.3f%%%s%s\n",
                (unsigned long long)seed, res.rms_khz, gm.angle_dev_deg, 100 * gm.g_rel_dev,
                res.escalated ? " (escalated)" : "", ok ? "" : "  <-- miss");
  }
  c.clause(good >= 18, "noisy recovery within 1 deg / 2%% in %d of 20 seeds (need >= 18)", good);
  std::printf("  worst noisy case: angle %.3f deg, g %.3f%%\n", worst_angle, 100 * worst_g);

  const auto obs0 = fitting::synth_observations(m, scan, tr, 0.0, 99);
  fitting::FitConfig cfg;
  cfg.target = 0;
  cfg.chains = 6;
  cfg.stop_rms_khz = 1.1;
  cfg.seed = 99;
  const auto res0 = fitting::bootstrap_fit(m, obs0, cfg);
  const auto gm0 = fitting::canonical_match(res0.params, truth, m.ground.d_mhz, m.ground.e_mhz);
  c.clause(gm0.angle_dev_deg < 0.01 && gm0.g_rel_dev < 1e-4,
           "noiseless recovery: angle dev %.2e deg < 0.01, g dev %.2e < 1e-4", gm0.angle_dev_deg,
           gm0.g_rel_dev);
  return c.all;
}

bool property_suites(const model::SiteModel& m, const std::string& cli) {
  Checker c;

  {  // spin-operator commutators and Casimir
    const Mat6c& x = spinops::ix();
    const Mat6c& y = spinops::iy();
    const Mat6c& z = spinops::iz();
    const Cplx im(0, 1);
    double d = 0;
    d = std::max(d, ((x * y - y * x) - im * z).cwiseAbs().maxCoeff());
    d = std::max(d, ((y * z - z * y) - im * x).cwiseAbs().maxCoeff());
    d = std::max(d, ((z * x - x * z) - im * y).cwiseAbs().maxCoeff());
    const Mat6c cas = x * x + y * y + z * z - 8.75 * Mat6c::Identity();
    d = std::max(d, cas.cwiseAbs().maxCoeff());
    c.clause(d < 1e-13, "commutators and Casimir: max residual %.2e < 1e-13", d);
  }

  {  // rotation orthogonality
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-360.0, 360.0);
    double d = 0;
    for (int i = 0; i < 100; ++i) {
      const Mat3 r = euler::rotation({u(rng), u(rng), u(rng)});
      d = std::max(d, (r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff());
      d = std::max(d, std::abs(r.determinant() - 1.0));
    }
    c.clause(d < 1e-12, "rotation orthogonality over 100 random triples: %.2e < 1e-12", d);
  }

  {  // doubly stochastic branching tables
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(-180.0, 180.0);
    std::uniform_real_distribution<double> dv(5.0, 30.0);
    std::uniform_real_distribution<double> er(0.0, 0.33);
    double d = 0;
    for (int i = 0; i < 50; ++i) {
      const Mat3 qg = tensor::quadrupole((rng() & 1 ? 1 : -1) * dv(rng), er(rng) * 20,
                                         {ang(rng), ang(rng), ang(rng)});
      const Mat3 qe = tensor::quadrupole((rng() & 1 ? 1 : -1) * dv(rng), er(rng) * 20,
                                         {ang(rng), ang(rng), ang(rng)});
      const Mat3 t = branching::table(qg, qe);
      for (int k = 0; k < 3; ++k) {
        d = std::max(d, std::abs(t.row(k).sum() - 1.0));
        d = std::max(d, std::abs(t.col(k).sum() - 1.0));
      }
    }
    c.clause(d < 1e-9, "row/column sums over 50 random tensor pairs: %.2e < 1e-9", d);
  }

  {  // FID round trip
    const std::vector<spectra::Line> lines = {
        {-272, -1}, {-120, -2}, {0, 4}, {35, 1}, {120, -2}};
    spectra::FidParams fp;
    fp.rate_khz = 2048;
    fp.lo_khz = 500;
    fp.tau_ms = 0.35;
    fp.phi0_rad = 0.7;
    const auto trace = spectra::fid_trace(lines, fp, 1.0);
    const auto rec = spectra::recover_spectrum(trace, fp, 1.0);
    double se = 0;
    for (const auto& r : rec) {
      double want = 0;
      for (const auto& l : lines)
        if (std::abs(l.f_khz - r.f_khz) < 1e-9) want = l.w;
      se += (r.w - want) * (r.w - want);
    }
    const double rms = std::sqrt(se / rec.size());
    c.clause(rms < 1e-6 * 4.0, "FID round trip rms %.2e < 1e-6 of peak", rms);
  }

  {  // production eigensolver vs the independent Jacobi oracle
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-25.0, 25.0);
    double d = 0;
    for (int it = 0; it < 1000; ++it) {
      Mat6c h;
      for (int i = 0; i < 6; ++i) {
        h(i, i) = Cplx(u(rng), 0);
        for (int j = i + 1; j < 6; ++j) {
          h(i, j) = Cplx(u(rng), u(rng));
          h(j, i) = std::conj(h(i, j));
        }
      }
      std::array<std::array<oracle::C, 6>, 6> a;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a[i][j] = h(i, j);
      const Vec6 ev = eigvals(h);
      const auto od = oracle::jacobi_eigh(a);
      for (int i = 0; i < 6; ++i) d = std::max(d, std::abs(ev[i] - od.values[i]));
    }
    c.clause(d < 1e-9, "eigensolver vs oracle over 1000 random Hermitians: %.2e < 1e-9", d);
  }

  {  // seeded determinism: synth through the CLI (byte-identical data files)
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "hs_acceptance10";
    const fs::path da = base / "a", db = base / "b";
    fs::remove_all(base);
    fs::create_directories(da);
    fs::create_directories(db);
    auto run = [&](const fs::path& out) {
      const std::string cmd = cli + " --model " + g_model_path + " --out " + out.string() +
                              " --seed 11 --scan 10,10,5,40 synth --noise-khz 0.5 >/dev/null 2>&1";
      return std::system(cmd.c_str());
    };
    const int rc1 = run(da), rc2 = run(db);
    const std::string f1 = slurp((da / "observations.csv").string());
    const std::string f2 = slurp((db / "observations.csv").string());
    c.clause(rc1 == 0 && rc2 == 0 && f1.size() > 100 && f1 == f2,
             "CLI synth twice with one seed: exit (%d, %d), %zu-byte files byte-identical: %s",
             rc1, rc2, f1.size(), f1 == f2 ? "yes" : "no");
    fs::remove_all(base);
  }

  {  // seeded determinism: fit (identical parameters and evaluation count)
    const auto obs = fitting::synth_observations(m, spectra::spiral_scan(10, 10, 5, 30),
                                                 {{1, 1}, {2, 2}}, 0.5, 3);
    fitting::FitConfig cfg;
    cfg.target = 0;
    cfg.chains = 2;
    cfg.stop_rms_khz = 1.1;
    cfg.seed = 17;
    const auto r1 = fitting::bootstrap_fit(m, obs, cfg);
    const auto r2 = fitting::bootstrap_fit(m, obs, cfg);
    const double pd =
        (fitting::pack(r1.params) - fitting::pack(r2.params)).cwiseAbs().maxCoeff();
    c.clause(pd == 0.0 && r1.evaluations == r2.evaluations,
             "bootstrap_fit twice with one seed: param diff %.1e, evaluations %ld vs %ld", pd,
             r1.evaluations, r2.evaluations);
  }
  return c.all;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: %s <criterion 1..10> <cli-path> <data-dir>\n", argv[0]);
    return 2;
  }
  const int n = std::atoi(argv[1]);
  const std::string cli = argv[2];
  g_model_path = std::string(argv[3]) + "/eu151_yso_site1.json";

  model::SiteModel m;
  try {
    m = model::load(g_model_path);
  } catch (const Error& e) {
    std::fprintf(stderr, "cannot load %s: %s\n", g_model_path.c_str(), e.what());
    return 2;
  }

  bool ok = false;
  const char* title = "";
  switch (n) {
    case 1:
      title = "zero-field gaps, ground state";
      ok = zero_field_gaps(0, m, 34.54, 46.25);
      break;
    case 2:
      title = "zero-field gaps, excited state";
      ok = zero_field_gaps(1, m, 75.0, 102.0);
      break;
    case 3:
      title = "crystal-frame reference matrices";
      ok = golden_matrices(m);
      break;
    case 4:
      title = "branching table and solution selection";
      ok = branching_selection(m);
      break;
    case 5:
      title = "sign-family orientation rows and spectrum equivalence";
      ok = orientation_rows(m);
      break;
    case 6:
      title = "quenching parameters";
      ok = quenching(m);
      break;
    case 7:
      title = "magnetic-subsite degeneracy";
      ok = subsite_degeneracy(m);
      break;
    case 8:
      title = "first-order splitting accuracy";
      ok = perturbation_accuracy(m);
      break;
    case 9:
      title = "fit round trip";
      ok = fit_round_trip(m);
      break;
    case 10:
      title = "property suites";
      ok = property_suites(m, cli);
      break;
    default:
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
  }
  std::printf("criterion %d (%s): %s\n", n, title, ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

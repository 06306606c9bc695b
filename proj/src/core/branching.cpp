#include "core/branching.hpp"

#include <algorithm>

#include "core/spinops.hpp"
#include "core/symmetry.hpp"

namespace hs::branching {

namespace {

std::array<Mat6c, 3> label_projectors(const Mat3& Q) {
  const auto ls = spinops::levels(spinops::hamiltonian(Q, Mat3::Zero(), Vec3::Zero()));
  const auto pol = spinops::pair_of_label(Q);
  std::array<Mat6c, 3> ps;
  for (int label = 0; label < 3; ++label) {
    const int p = pol[label];
    ps[label] = ls.states.col(2 * p) * ls.states.col(2 * p).adjoint() +
                ls.states.col(2 * p + 1) * ls.states.col(2 * p + 1).adjoint();
  }
  return ps;
}

}  // namespace

Mat3 table(const Mat3& Qg, const Mat3& Qe) {
  const auto pg = label_projectors(Qg);
  const auto pe = label_projectors(Qe);
  Mat3 t;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) t(k, l) = 0.5 * (pg[k] * pe[l]).trace().real();
  return t;
}

Mat3 site_table(const model::SiteModel& m) {
  Mat3 acc = Mat3::Zero();
  for (int sub = 0; sub < 2; ++sub) acc += table(m.Q(0, sub), m.Q(1, sub));
  return 0.5 * acc;
}

Vec3 quenching_alphas(const Vec3& g_mhz_per_t, double gn_mhz_per_t) {
  return Vec3::Ones() - g_mhz_per_t / gn_mhz_per_t;
}

std::vector<Pairing> select_solution(const model::SiteModel& m, const Mat3& measured,
                                     double band, bool restrict_excited) {
  const auto fam_g = symmetry::enumerate_solutions(m.ground.q_abg_deg, m.ground.d_mhz,
                                                   m.ground.e_mhz, m.ground.g_mhz_per_t,
                                                   m.ground.m_abg_deg);
  const auto fam_e = symmetry::enumerate_solutions(m.excited.q_abg_deg, m.excited.d_mhz,
                                                   m.excited.e_mhz, m.excited.g_mhz_per_t,
                                                   m.excited.m_abg_deg);
  std::vector<std::array<Mat6c, 3>> pg, pe;
  for (const auto& v : fam_g) pg.push_back(label_projectors(v.Q));
  for (const auto& v : fam_e) pe.push_back(label_projectors(v.Q));

  std::vector<Pairing> out;
  for (int ig = 0; ig < 8; ++ig) {
    for (int ie = 0; ie < 8; ++ie) {
      if (restrict_excited && ie != 0) continue;
      Pairing p;
      p.ig = ig;
      p.ie = ie;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) p.table(k, l) = 0.5 * (pg[ig][k] * pe[ie][l]).trace().real();
      p.max_dev = (p.table - measured).cwiseAbs().maxCoeff();
      p.in_band = p.max_dev <= band;
      out.push_back(p);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Pairing& a, const Pairing& b) { return a.max_dev < b.max_dev; });
  return out;
}

}  // namespace hs::branching

#include "hyperspin.h"

#include <cstring>
#include <string>

#include "core/branching.hpp"
#include "core/euler.hpp"
#include "core/fitting.hpp"
#include "core/model.hpp"
#include "core/perturb.hpp"
#include "core/spectra.hpp"
#include "core/spinops.hpp"
#include "core/symmetry.hpp"

namespace {

thread_local std::string t_last_error;

int code_of(hs::Err e) {
  using hs::Err;
  switch (e) {
    case Err::Ok: return HS_OK;
    case Err::BadArgument: return HS_ERR_BAD_ARGUMENT;
    case Err::DegeneracyAmbiguous: return HS_ERR_DEGENERACY_AMBIGUOUS;
    case Err::IllConditioned: return HS_ERR_ILL_CONDITIONED;
    case Err::InsufficientCoincidences: return HS_ERR_INSUFFICIENT_COINCIDENCES;
    case Err::SingularNormalMatrix: return HS_ERR_SINGULAR_NORMAL_MATRIX;
    case Err::NyquistViolation: return HS_ERR_NYQUIST_VIOLATION;
    case Err::ParseError: return HS_ERR_PARSE;
    case Err::IoError: return HS_ERR_IO;
    case Err::FitFailed: return HS_ERR_FIT_FAILED;
  }
  return HS_ERR_UNKNOWN;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return HS_OK;
  } catch (const hs::Error& e) {
    t_last_error = e.what();
    return code_of(e.code);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return HS_ERR_UNKNOWN;
  } catch (...) {
    t_last_error = "unknown failure";
    return HS_ERR_UNKNOWN;
  }
}

int fill_text(const std::string& s, char* buf, size_t cap, size_t* need) {
  if (need) *need = s.size() + 1;
  if (!buf) {
    if (!need) throw hs::Error(hs::Err::BadArgument, "null buffer and null size pointer");
    return HS_OK;
  }
  if (cap < s.size() + 1) throw hs::Error(hs::Err::BadArgument, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return HS_OK;
}

void check(bool ok, const char* msg) {
  if (!ok) throw hs::Error(hs::Err::BadArgument, msg);
}

hs::Vec3 vec_of(const double b[3]) { return {b[0], b[1], b[2]}; }

}  // namespace

struct hs_model {
  hs::model::SiteModel m;
};
struct hs_observations {
  hs::fitting::ObservationSet obs;
};
struct hs_fit_result {
  hs::fitting::FitResult res;
  hs::model::SiteModel base;
  int target = 0;
};

extern "C" {

const char* hs_last_error(void) { return t_last_error.c_str(); }
const char* hs_version(void) { return "hyperspin 1.0.0"; }

int hs_model_load(const char* path, hs_model** out) {
  return guarded([&] {
    check(path && out, "null argument");
    *out = new hs_model{hs::model::load(path)};
  });
}

int hs_model_from_json(const char* text, hs_model** out) {
  return guarded([&] {
    check(text && out, "null argument");
    *out = new hs_model{hs::model::from_json_text(text)};
  });
}

int hs_model_to_json(const hs_model* m, char* buf, size_t cap, size_t* need) {
  return guarded([&] {
    check(m != nullptr, "null model");
    fill_text(hs::model::to_json_text(m->m), buf, cap, need);
  });
}

int hs_model_save(const hs_model* m, const char* path) {
  return guarded([&] {
    check(m && path, "null argument");
    hs::model::save(m->m, path);
  });
}

void hs_model_free(hs_model* m) { delete m; }

int hs_frame_vector(const hs_model* m, const double in[3], double out[3], int to_crystal) {
  return guarded([&] {
    check(m && in && out, "null argument");
    const hs::Mat3 r = hs::euler::rotation(m->m.frame_abg_deg);
    const hs::Vec3 v = to_crystal ? hs::Vec3(r * vec_of(in)) : hs::Vec3(r.transpose() * vec_of(in));
    for (int i = 0; i < 3; ++i) out[i] = v[i];
  });
}

int hs_zero_field_gaps(const hs_model* m, int target, double gaps_mhz[2]) {
  return guarded([&] {
    check(m && gaps_mhz && (target == 0 || target == 1), "bad argument");
    const auto ls = hs::spinops::levels(
        hs::spinops::hamiltonian(m->m.Q(target, 0), hs::Mat3::Zero(), hs::Vec3::Zero()));
    gaps_mhz[0] = ls.gap_mhz[0];
    gaps_mhz[1] = ls.gap_mhz[1];
  });
}

int hs_energies(const hs_model* m, int target, int subsite, const double b_mt[3],
                double out_mhz[6]) {
  return guarded([&] {
    check(m && b_mt && out_mhz && (target == 0 || target == 1) && (subsite == 0 || subsite == 1),
          "bad argument");
    const auto ls = hs::spinops::levels(
        hs::spinops::hamiltonian(m->m.Q(target, subsite), m->m.M(target, subsite), vec_of(b_mt)));
    for (int i = 0; i < 6; ++i) out_mhz[i] = ls.energies_mhz[i];
  });
}

int hs_splittings(const hs_model* m, int target, int subsite, const double b_mt[3],
                  double out_khz[3]) {
  return guarded([&] {
    check(m && b_mt && out_khz && (target == 0 || target == 1) && (subsite == 0 || subsite == 1),
          "bad argument");
    const hs::Mat3 q = m->m.state(target).Q();
    const auto pol = hs::spinops::pair_of_label(q);
    const hs::Vec3 b =
        subsite == 0 ? vec_of(b_mt) : hs::Vec3(m->m.c2() * vec_of(b_mt));
    const auto d = hs::spinops::exact_split_khz(q, m->m.state(target).M(), b, pol);
    for (int i = 0; i < 3; ++i) out_khz[i] = d[i];
  });
}

int hs_splittings_pt(const hs_model* m, int target, int subsite, const double b_mt[3],
                     double out_khz[3]) {
  return guarded([&] {
    check(m && b_mt && out_khz && (target == 0 || target == 1) && (subsite == 0 || subsite == 1),
          "bad argument");
    const auto sm =
        hs::perturb::split_model(m->m.state(target).Q(), m->m.state(target).M());
    const hs::Vec3 b =
        subsite == 0 ? vec_of(b_mt) : hs::Vec3(m->m.c2() * vec_of(b_mt));
    const auto d = hs::perturb::first_order_split_khz(sm, b);
    for (int i = 0; i < 3; ++i) out_khz[i] = d[i];
  });
}

int hs_response_coefficients(const hs_model* m, int target, double out[9]) {
  return guarded([&] {
    check(m && out && (target == 0 || target == 1), "bad argument");
    const auto sm =
        hs::perturb::split_model(m->m.state(target).Q(), m->m.state(target).M());
    const auto c = hs::perturb::response_coefficients(sm);
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) out[3 * k + j] = c[k][j];
  });
}

int hs_spiral_scan(double bx_mt, double by_mt, double bz_mt, int n, double* out_xyz) {
  return guarded([&] {
    check(out_xyz != nullptr, "null output");
    const auto pts = hs::spectra::spiral_scan(bx_mt, by_mt, bz_mt, n);
    for (size_t i = 0; i < pts.size(); ++i)
      for (int j = 0; j < 3; ++j) out_xyz[3 * i + j] = pts[i][j];
  });
}

int hs_site_lines(const hs_model* m, const double b_mt[3], int k, int l, double* f_khz,
                  double* weight, size_t cap, size_t* count) {
  return guarded([&] {
    check(m && b_mt && count, "bad argument");
    const auto lines = hs::spectra::site_lines(m->m, vec_of(b_mt), k, l);
    *count = lines.size();
    if (!f_khz || !weight) return;
    const size_t n = std::min(cap, lines.size());
    for (size_t i = 0; i < n; ++i) {
      f_khz[i] = lines[i].f_khz;
      weight[i] = lines[i].w;
    }
  });
}

int hs_branching_table(const hs_model* m, double out[9]) {
  return guarded([&] {
    check(m && out, "bad argument");
    const hs::Mat3 t = hs::branching::site_table(m->m);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) out[3 * k + l] = t(k, l);
  });
}

int hs_quenching(const hs_model* m, int target, double out[3]) {
  return guarded([&] {
    check(m && out && (target == 0 || target == 1), "bad argument");
    const hs::Vec3 a = hs::branching::quenching_alphas(m->m.state(target).g_mhz_per_t);
    for (int i = 0; i < 3; ++i) out[i] = a[i];
  });
}

int hs_enumerate_solutions(const hs_model* m, int target, double out_q_abg[24],
                           double out_g[24]) {
  return guarded([&] {
    check(m && out_q_abg && out_g && (target == 0 || target == 1), "bad argument");
    const auto& st = m->m.state(target);
    const auto fam = hs::symmetry::enumerate_solutions(st.q_abg_deg, st.d_mhz, st.e_mhz,
                                                       st.g_mhz_per_t, st.m_abg_deg);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 3; ++j) {
        out_q_abg[3 * i + j] = fam[i].q_abg_deg[j];
        out_g[3 * i + j] = fam[i].g[j];
      }
  });
}

int hs_select_solution(const hs_model* m, const double measured[9], double band,
                       int restrict_excited, int* ig, int* ie, double* max_dev, int* in_band,
                       size_t cap, size_t* n_out) {
  return guarded([&] {
    check(m && measured && n_out, "bad argument");
    hs::Mat3 meas;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) meas(k, l) = measured[3 * k + l];
    const auto ranked = hs::branching::select_solution(m->m, meas, band, restrict_excited != 0);
    *n_out = std::min(cap, ranked.size());
    for (size_t i = 0; i < *n_out; ++i) {
      if (ig) ig[i] = ranked[i].ig;
      if (ie) ie[i] = ranked[i].ie;
      if (max_dev) max_dev[i] = ranked[i].max_dev;
      if (in_band) in_band[i] = ranked[i].in_band ? 1 : 0;
    }
  });
}

int hs_observations_synth(const hs_model* m, const double* b_xyz_mt, size_t n_points,
                          const int* kl_pairs, size_t n_trans, double noise_khz, uint64_t seed,
                          hs_observations** out) {
  return guarded([&] {
    check(m && b_xyz_mt && kl_pairs && out && n_points > 0 && n_trans > 0, "bad argument");
    std::vector<hs::Vec3> scan(n_points);
    for (size_t i = 0; i < n_points; ++i)
      scan[i] = {b_xyz_mt[3 * i], b_xyz_mt[3 * i + 1], b_xyz_mt[3 * i + 2]};
    std::vector<std::pair<int, int>> tr(n_trans);
    for (size_t i = 0; i < n_trans; ++i) tr[i] = {kl_pairs[2 * i], kl_pairs[2 * i + 1]};
    *out = new hs_observations{
        hs::fitting::synth_observations(m->m, scan, tr, noise_khz, seed)};
  });
}

int hs_observations_from_csv(const char* text, hs_observations** out) {
  return guarded([&] {
    check(text && out, "null argument");
    *out = new hs_observations{hs::fitting::from_csv(text)};
  });
}

int hs_observations_to_csv(const hs_observations* o, char* buf, size_t cap, size_t* need) {
  return guarded([&] {
    check(o != nullptr, "null observations");
    fill_text(hs::fitting::to_csv(o->obs), buf, cap, need);
  });
}

size_t hs_observations_count(const hs_observations* o) { return o ? o->obs.size() : 0; }

void hs_observations_free(hs_observations* o) { delete o; }

int hs_fit_options_init(hs_fit_options* opt) {
  return guarded([&] {
    check(opt != nullptr, "null options");
    opt->target = 0;
    opt->assignment = 0;
    opt->chains = 6;
    opt->stop_rms_khz = 0.0;
    opt->escalate_rms_khz = 4.0;
    opt->seed = 1;
  });
}

int hs_bootstrap_fit(const hs_model* m, const hs_observations* obs, const hs_fit_options* opt,
                     hs_fit_result** out) {
  return guarded([&] {
    check(m && obs && opt && out, "null argument");
    check(opt->target == 0 || opt->target == 1, "target must be 0 or 1");
    hs::fitting::FitConfig cfg;
    cfg.target = opt->target;
    cfg.assignment = opt->assignment == 1 ? hs::fitting::Assignment::Nearest
                                          : hs::fitting::Assignment::Paired;
    if (opt->chains > 0) cfg.chains = opt->chains;
    cfg.stop_rms_khz = opt->stop_rms_khz;
    if (opt->escalate_rms_khz > 0) cfg.escalate_rms_khz = opt->escalate_rms_khz;
    cfg.seed = opt->seed;
    auto res = hs::fitting::bootstrap_fit(m->m, obs->obs, cfg);
    *out = new hs_fit_result{std::move(res), m->m, cfg.target};
  });
}

int hs_fit_result_params(const hs_fit_result* r, double out[11]) {
  return guarded([&] {
    check(r && out, "null argument");
    const Eigen::VectorXd x = hs::fitting::pack(r->res.params);
    for (int i = 0; i < 11; ++i) out[i] = x[i];
  });
}

int hs_fit_result_stats(const hs_fit_result* r, double* rms_khz, double* chi2,
                        long* evaluations, int* escalated) {
  return guarded([&] {
    check(r != nullptr, "null result");
    if (rms_khz) *rms_khz = r->res.rms_khz;
    if (chi2) *chi2 = r->res.chi2;
    if (evaluations) *evaluations = r->res.evaluations;
    if (escalated) *escalated = r->res.escalated ? 1 : 0;
  });
}

int hs_fit_result_model(const hs_fit_result* r, hs_model** out) {
  return guarded([&] {
    check(r && out, "null argument");
    *out = new hs_model{hs::fitting::apply_params(r->base, r->target, r->res.params)};
  });
}

void hs_fit_result_free(hs_fit_result* r) { delete r; }

}  // extern "C"

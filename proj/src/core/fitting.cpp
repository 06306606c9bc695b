#include "core/fitting.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "core/euler.hpp"
#include "core/perturb.hpp"
#include "core/rng.hpp"
#include "core/spinops.hpp"
#include "core/symmetry.hpp"
#include "core/tensor.hpp"

namespace hs::fitting {

const char* const kParamNames[11] = {"q_alpha", "q_beta", "q_gamma", "m_alpha", "m_beta",
                                     "m_gamma", "g1",      "g2",     "g3",      "c2_alpha",
                                     "c2_beta"};

Eigen::VectorXd pack(const FitParams& p) {
  Eigen::VectorXd x(11);
  x << p.q_abg_deg, p.m_abg_deg, p.g_mhz_per_t, p.c2_alpha_deg, p.c2_beta_deg;
  return x;
}

FitParams unpack(const Eigen::VectorXd& x) {
  FitParams p;
  p.q_abg_deg = x.segment<3>(0);
  p.m_abg_deg = x.segment<3>(3);
  p.g_mhz_per_t = x.segment<3>(6);
  p.c2_alpha_deg = x[9];
  p.c2_beta_deg = x[10];
  return p;
}

model::SiteModel apply_params(const model::SiteModel& base, int target, const FitParams& p) {
  model::SiteModel m = base;
  model::StateModel& st = target == 0 ? m.ground : m.excited;
  st.q_abg_deg = p.q_abg_deg;
  st.m_abg_deg = p.m_abg_deg;
  st.g_mhz_per_t = p.g_mhz_per_t;
  m.frame_abg_deg[0] = p.c2_alpha_deg;
  m.frame_abg_deg[1] = p.c2_beta_deg;
  return m;
}

FitParams params_of(const model::SiteModel& m, int target) {
  const model::StateModel& st = m.state(target);
  FitParams p;
  p.q_abg_deg = st.q_abg_deg;
  p.m_abg_deg = st.m_abg_deg;
  p.g_mhz_per_t = st.g_mhz_per_t;
  p.c2_alpha_deg = m.frame_abg_deg[0];
  p.c2_beta_deg = m.frame_abg_deg[1];
  return p;
}

ObservationSet synth_observations(const model::SiteModel& m, const std::vector<Vec3>& scan,
                                  const std::vector<std::pair<int, int>>& transitions,
                                  double noise_khz, std::uint64_t seed) {
  rng::Rng rn(seed);
  ObservationSet out;
  const auto polg = spinops::pair_of_label(m.ground.Q());
  const auto pole = spinops::pair_of_label(m.excited.Q());
  const Mat3 c2 = m.c2();
  const double sigma = noise_khz;
  for (size_t n = 0; n < scan.size(); ++n) {
    std::array<std::array<double, 3>, 2> dg, de;
    for (int sub = 0; sub < 2; ++sub) {
      const Vec3 b = sub == 0 ? scan[n] : Vec3(c2 * scan[n]);
      dg[sub] = spinops::exact_split_khz(m.ground.Q(), m.ground.M(), b, polg);
      de[sub] = spinops::exact_split_khz(m.excited.Q(), m.excited.M(), b, pole);
    }
    for (const auto& [k, l] : transitions) {
      for (int kind = 0; kind < 2; ++kind) {
        for (int sub = 0; sub < 2; ++sub) {
          Observation o;
          o.scan = int(n);
          o.b_mt = scan[n];
          o.k = k;
          o.l = l;
          o.kind = kind;
          o.sigma_khz = sigma;
          const double truth = kind == 0 ? de[sub][l] : dg[sub][k];
          o.offset_khz = truth + sigma * rn.normal();
          out.push_back(o);
        }
      }
    }
  }
  return out;
}

std::string to_csv(const ObservationSet& obs) {
  std::string s = "scan_n,Bx_mT,By_mT,Bz_mT,k,l,kind,offset_khz,sigma_khz\n";
  char buf[256];
  for (const auto& o : obs) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%d,%d,%s,%.9g,%.9g\n", o.scan, o.b_mt[0],
                  o.b_mt[1], o.b_mt[2], o.k, o.l, o.kind == 0 ? "hole" : "antihole", o.offset_khz,
                  o.sigma_khz);
    s += buf;
  }
  return s;
}

ObservationSet from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ObservationSet out;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("scan_n", 0) == 0) continue;  // header
    }
    std::array<std::string, 9> f;
    size_t pos = 0;
    for (int i = 0; i < 9; ++i) {
      const size_t c = line.find(',', pos);
      if (c == std::string::npos && i < 8)
        throw Error(Err::ParseError, "observation csv: expected 9 fields: " + line);
      f[i] = line.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
      pos = c + 1;
    }
    try {
      Observation o;
      o.scan = std::stoi(f[0]);
      o.b_mt = {std::stod(f[1]), std::stod(f[2]), std::stod(f[3])};
      o.k = std::stoi(f[4]);
      o.l = std::stoi(f[5]);
      if (f[6] == "hole")
        o.kind = 0;
      else if (f[6] == "antihole")
        o.kind = 1;
      else
        throw Error(Err::ParseError, "observation csv: kind must be hole or antihole");
      o.offset_khz = std::stod(f[7]);
      o.sigma_khz = std::stod(f[8]);
      if (o.k < 0 || o.k > 2 || o.l < 0 || o.l > 2)
        throw Error(Err::ParseError, "observation csv: labels out of range");
      out.push_back(o);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(Err::ParseError, "observation csv: bad numeric field: " + line);
    }
  }
  return out;
}

namespace {

// observations regrouped by (scan, k, l, kind): the (usually two) subsite
// rows that share one predicted pair
struct Group {
  Vec3 b;
  int state, label;
  int n = 0;
  double off[2] = {0, 0}, sig[2] = {1, 1};
};

struct Engine {
  const model::SiteModel* base;
  FitConfig cfg;
  std::vector<Group> groups;
  std::vector<int> scan_of_group;           // original scan ids, compacted
  perturb::SplitModel w_fixed;              // other state, subsite 0
  std::array<int, 3> pol_fixed;
  double de_fix, ee_fix;                    // fitted state's fixed principal values
  mutable long evals = 0;

  Engine(const model::SiteModel& b, const ObservationSet& obs, const FitConfig& c)
      : base(&b), cfg(c) {
    const model::StateModel& fixed = b.state(1 - c.target);
    w_fixed = perturb::split_model(fixed.Q(), fixed.M());
    pol_fixed = spinops::pair_of_label(fixed.Q());
    de_fix = b.state(c.target).d_mhz;
    ee_fix = b.state(c.target).e_mhz;
    std::map<std::tuple<int, int, int, int>, int> index;
    for (const auto& o : obs) {
      const int state = o.kind == 0 ? 1 : 0;
      const int label = o.kind == 0 ? o.l : o.k;
      const auto key = std::make_tuple(o.scan, state, label, o.kind);
      auto it = index.find(key);
      if (it == index.end()) {
        Group g;
        g.b = o.b_mt;
        g.state = state;
        g.label = label;
        index.emplace(key, int(groups.size()));
        groups.push_back(g);
        scan_of_group.push_back(o.scan);
        it = index.find(key);
      }
      Group& g = groups[it->second];
      if (g.n >= 2) throw Error(Err::BadArgument, "more than two subsite rows in one group");
      g.off[g.n] = o.offset_khz;
      g.sig[g.n] = std::max(o.sigma_khz, 1e-3);
      ++g.n;
    }
  }

  // per-group predictions for the two subsites
  void predict(const FitParams& p, std::vector<std::array<double, 2>>& pred) const {
    ++evals;
    const Mat3 qt = tensor::quadrupole(de_fix, ee_fix, p.q_abg_deg);
    const Mat3 mt = tensor::zeeman(p.g_mhz_per_t, p.m_abg_deg);
    const Mat3 c2 = symmetry::c2_rotation(p.c2_alpha_deg, p.c2_beta_deg);
    pred.resize(groups.size());
    if (!cfg.exact) {
      const perturb::SplitModel wt = perturb::split_model(qt, mt);
      for (size_t i = 0; i < groups.size(); ++i) {
        const Group& g = groups[i];
        const auto& w = g.state == cfg.target ? wt : w_fixed;
        const Vec3 b2 = c2 * g.b;
        pred[i][0] = 2.0 * (w.w[g.label] * g.b).norm();
        pred[i][1] = 2.0 * (w.w[g.label] * b2).norm();
      }
      return;
    }
    const auto polt = spinops::pair_of_label(qt);
    const model::StateModel& fixed = base->state(1 - cfg.target);
    const Mat3 qf = fixed.Q(), mf = fixed.M();
    // exact splittings cache per (scan, state, subsite)
    std::map<std::tuple<int, int, int>, std::array<double, 3>> cache;
    for (size_t i = 0; i < groups.size(); ++i) {
      const Group& g = groups[i];
      for (int sub = 0; sub < 2; ++sub) {
        const auto key = std::make_tuple(scan_of_group[i], g.state, sub);
        auto it = cache.find(key);
        if (it == cache.end()) {
          const Vec3 b = sub == 0 ? g.b : Vec3(c2 * g.b);
          const bool tgt = g.state == cfg.target;
          const auto d = spinops::exact_split_khz(tgt ? qt : qf, tgt ? mt : mf, b,
                                                  tgt ? polt : pol_fixed);
          it = cache.emplace(key, d).first;
        }
        pred[i][sub] = it->second[g.label];
      }
    }
  }

  // weighted residuals under `mode`; fills 2 entries per full group
  void residuals(const FitParams& p, Assignment mode, std::vector<double>& r) const {
    std::vector<std::array<double, 2>> pred;
    predict(p, pred);
    r.clear();
    r.reserve(2 * groups.size());
    for (size_t i = 0; i < groups.size(); ++i) {
      const Group& g = groups[i];
      double p0 = pred[i][0], p1 = pred[i][1];
      if (g.n == 1) {
        const double d = std::min(std::abs(g.off[0] - p0), std::abs(g.off[0] - p1));
        r.push_back((mode == Assignment::Nearest ? std::min(d, cfg.gate_khz) : d) / g.sig[0]);
        continue;
      }
      if (mode == Assignment::Paired) {
        double o0 = g.off[0], o1 = g.off[1];
        double s0 = g.sig[0], s1 = g.sig[1];
        if (o0 > o1) {
          std::swap(o0, o1);
          std::swap(s0, s1);
        }
        if (p0 > p1) std::swap(p0, p1);
        r.push_back((o0 - p0) / s0);
        r.push_back((o1 - p1) / s1);
      } else {
        for (int j = 0; j < 2; ++j) {
          const double d = std::min(std::abs(g.off[j] - p0), std::abs(g.off[j] - p1));
          r.push_back(std::min(d, cfg.gate_khz) / g.sig[j]);
        }
      }
    }
  }

  double cost(const FitParams& p, Assignment mode) const {
    std::vector<double> r;
    residuals(p, mode, r);
    double c = 0;
    for (double v : r) c += v * v;
    return c;
  }

  // unweighted nearest-assignment rms in kHz (uncapped), the reporting metric
  double rms(const FitParams& p) const {
    std::vector<std::array<double, 2>> pred;
    predict(p, pred);
    double ss = 0;
    long n = 0;
    for (size_t i = 0; i < groups.size(); ++i) {
      const Group& g = groups[i];
      for (int j = 0; j < g.n; ++j) {
        const double d =
            std::min(std::abs(g.off[j] - pred[i][0]), std::abs(g.off[j] - pred[i][1]));
        ss += d * d;
        ++n;
      }
    }
    return n ? std::sqrt(ss / n) : 0.0;
  }
};

Eigen::VectorXd wrap_params(Eigen::VectorXd x, const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi) {
  for (int i = 0; i < 6; ++i) x[i] = euler::wrap_deg(x[i]);
  for (int i = 6; i < 11; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

struct LmOut {
  Eigen::VectorXd x;
  double cost = 0;
  Eigen::MatrixXd jtj;
  bool have_jtj = false;
};

// plain Levenberg-Marquardt with forward-difference Jacobian on the
// assignment-resolved residual vector
LmOut levenberg(const Engine& eng, Eigen::VectorXd x, Assignment mode, int iters,
                const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, bool want_jtj) {
  std::vector<double> r0, rt;
  auto eval = [&](const Eigen::VectorXd& v, std::vector<double>& r) {
    eng.residuals(unpack(v), mode, r);
  };
  eval(x, r0);
  auto costof = [](const std::vector<double>& r) {
    double c = 0;
    for (double v : r) c += v * v;
    return c;
  };
  double cost = costof(r0);
  double lambda = 1e-3;
  const int m = int(r0.size());
  Eigen::MatrixXd j(m, 11);
  Eigen::VectorXd g(11);
  LmOut out;
  for (int it = 0; it < iters; ++it) {
    for (int p = 0; p < 11; ++p) {
      const double h = p < 6 ? 1e-4 : (p < 9 ? 1e-5 * (1 + std::abs(x[p])) : 1e-4);
      Eigen::VectorXd xp = x;
      xp[p] += h;
      eval(xp, rt);
      if (int(rt.size()) != m) {  // assignment flip changed the vector shape
        for (int i = 0; i < m; ++i) j(i, p) = 0;
        continue;
      }
      for (int i = 0; i < m; ++i) j(i, p) = (rt[i] - r0[i]) / h;
    }
    const Eigen::MatrixXd jtj = j.transpose() * j;
    g.setZero();
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < 11; ++p) g[p] += j(i, p) * r0[i];
    bool stepped = false;
    for (int tries = 0; tries < 8; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd dx = a.ldlt().solve(-g);
      const Eigen::VectorXd xn = wrap_params(x + dx, lo, hi);
      eval(xn, rt);
      const double cn = costof(rt);
      if (cn < cost) {
        x = xn;
        r0 = rt;
        cost = cn;
        lambda = std::max(lambda * 0.3, 1e-10);
        stepped = true;
        break;
      }
      lambda *= 8;
    }
    if (!stepped) break;
    if (it > 2 && cost < 1e-18) break;
  }
  out.x = x;
  out.cost = cost;
  if (want_jtj) {
    // rebuild the Jacobian at the solution for the covariance
    eval(x, r0);
    for (int p = 0; p < 11; ++p) {
      const double h = p < 6 ? 1e-5 : (p < 9 ? 1e-6 * (1 + std::abs(x[p])) : 1e-5);
      Eigen::VectorXd xp = x;
      xp[p] += h;
      eval(xp, rt);
      for (int i = 0; i < m && i < int(rt.size()); ++i) j(i, p) = (rt[i] - r0[i]) / h;
    }
    out.jtj = j.transpose() * j;
    out.have_jtj = true;
  }
  return out;
}

void bounds_of(const FitConfig& cfg, const FitParams* init, const model::SiteModel& base,
               Eigen::VectorXd& lo, Eigen::VectorXd& hi, Eigen::VectorXd& center) {
  lo.resize(11);
  hi.resize(11);
  const double c2a = init ? init->c2_alpha_deg : base.frame_abg_deg[0];
  const double c2b = init ? init->c2_beta_deg : base.frame_abg_deg[1];
  for (int i = 0; i < 6; ++i) {
    lo[i] = -180;
    hi[i] = 180;
  }
  for (int i = 6; i < 9; ++i) {
    lo[i] = -cfg.g_bound;
    hi[i] = cfg.g_bound;
  }
  lo[9] = c2a - cfg.c2_box_deg;
  hi[9] = c2a + cfg.c2_box_deg;
  lo[10] = c2b - cfg.c2_box_deg;
  hi[10] = c2b + cfg.c2_box_deg;
  center.resize(11);
  center.setZero();
  center[9] = c2a;
  center[10] = c2b;
}

}  // namespace

std::vector<double> residuals(const model::SiteModel& base, const FitParams& p,
                              const ObservationSet& obs, const FitConfig& cfg) {
  Engine eng(base, obs, cfg);
  std::vector<double> r;
  eng.residuals(p, cfg.assignment, r);
  return r;
}

FitResult anneal(const model::SiteModel& base, const ObservationSet& obs, const FitConfig& cfg,
                 const FitParams* init) {
  FitConfig icfg = cfg;
  icfg.exact = false;  // first-order model carries the global search
  Engine eng(base, obs, icfg);
  rng::Rng rn(cfg.seed);
  Eigen::VectorXd lo, hi, center;
  bounds_of(cfg, init, base, lo, hi, center);
  // jump widths per parameter (degrees / MHz/T)
  Eigen::VectorXd w(11);
  w << 60, 35, 60, 60, 35, 60, 6, 6, 6, 1.5, 0.8;

  auto random_x = [&] {
    Eigen::VectorXd x(11);
    for (int i = 0; i < 11; ++i) x[i] = rn.uniform(lo[i], hi[i]);
    x[1] = rn.uniform(0, 180);  // beta ranges
    x[4] = rn.uniform(0, 180);
    return x;
  };

  Eigen::VectorXd xbest;
  double cbest = 1e300;
  long hops_total = 0;
  const int nhops = std::max(1, int(std::ceil(std::log(cfg.t_floor) / std::log(cfg.cool))));
  bool stop = false;
  for (int chain = 0; chain < cfg.chains && !stop; ++chain) {
    Eigen::VectorXd x = (chain == 0 && init) ? pack(*init) : random_x();
    LmOut cur = levenberg(eng, x, icfg.assignment, cfg.polish_iters, lo, hi, false);
    if (cur.cost < cbest) {
      cbest = cur.cost;
      xbest = cur.x;
    }
    double tscale = std::max(cur.cost, 1.0);
    double t = tscale;
    for (int hop = 0; hop < nhops && !stop; ++hop, ++hops_total) {
      Eigen::VectorXd xp(11);
      if (rn.uniform() < cfg.redraw_prob) {
        xp = random_x();
      } else {
        const double rel = t / tscale;
        for (int i = 0; i < 11; ++i) xp[i] = cur.x[i] + rel * w[i] * rn.normal();
        xp = wrap_params(xp, lo, hi);
      }
      LmOut nxt = levenberg(eng, xp, icfg.assignment, cfg.polish_iters, lo, hi, false);
      if (nxt.cost < cbest) {
        cbest = nxt.cost;
        xbest = nxt.x;
        if (cfg.stop_rms_khz > 0 && eng.rms(unpack(xbest)) < cfg.stop_rms_khz) stop = true;
      }
      const double dc = nxt.cost - cur.cost;
      if (dc < 0 || rn.uniform() < std::exp(-dc / t)) cur = nxt;
      t *= cfg.cool;
    }
  }
  FitResult res;
  res.params = unpack(xbest);
  res.chi2 = cbest;
  res.rms_khz = eng.rms(res.params);
  res.evaluations = eng.evals;
  return res;
}

FitResult refine(const model::SiteModel& base, const FitParams& start, const ObservationSet& obs,
                 const FitConfig& cfg) {
  Engine eng(base, obs, cfg);
  Eigen::VectorXd lo, hi, center;
  bounds_of(cfg, &start, base, lo, hi, center);
  lo[9] -= 360;  // refine is local: no box constraints beyond g bounds
  hi[9] += 360;
  lo[10] -= 360;
  hi[10] += 360;
  const LmOut out =
      levenberg(eng, pack(start), cfg.assignment, cfg.refine_iters, lo, hi, true);
  FitResult res;
  res.params = unpack(out.x);
  res.chi2 = out.cost;
  res.rms_khz = eng.rms(res.params);
  res.evaluations = eng.evals;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.jtj);
  const auto& ev = es.eigenvalues();
  if (ev(0) < 1e-10 * std::max(ev(10), 1e-300)) {
    std::string dirs;
    const Eigen::VectorXd v = es.eigenvectors().col(0).cwiseAbs();
    for (int i = 0; i < 11; ++i)
      if (v[i] > 0.3) dirs += std::string(dirs.empty() ? "" : ", ") + kParamNames[i];
    throw Error(Err::SingularNormalMatrix,
                "normal matrix is singular along: " + (dirs.empty() ? "mixed directions" : dirs));
  }
  res.covariance = out.jtj.inverse();
  return res;
}

FitResult bootstrap_fit(const model::SiteModel& base, const ObservationSet& obs,
                        const FitConfig& cfg) {
  // stage 1: C2 axis from subsite coincidences
  std::map<int, perturb::SubsitePoint> per_scan;
  {
    std::map<std::tuple<int, int, int, int>, std::vector<double>> grp;
    std::map<int, Vec3> bvec;
    for (const auto& o : obs) {
      grp[{o.scan, o.k, o.l, o.kind}].push_back(o.offset_khz);
      bvec[o.scan] = o.b_mt;
    }
    for (const auto& [key, vals] : grp) {
      if (vals.size() != 2) continue;
      auto& sp = per_scan[std::get<0>(key)];
      sp.b_mt = bvec[std::get<0>(key)];
      sp.a_khz.push_back(std::min(vals[0], vals[1]));
      sp.b_khz.push_back(std::max(vals[0], vals[1]));
    }
  }
  std::vector<perturb::SubsitePoint> pts;
  for (auto& [scan, sp] : per_scan) pts.push_back(sp);
  FitParams init;
  init.c2_alpha_deg = base.frame_abg_deg[0];
  init.c2_beta_deg = base.frame_abg_deg[1];
  double c2_box = cfg.c2_box_deg;
  try {
    const Vec3 n = perturb::estimate_c2_axis(pts, cfg.coincidence_tol_khz);
    init.c2_alpha_deg = std::atan2(n[1], n[0]) / kDegToRad;
    init.c2_beta_deg = std::acos(std::clamp(n[2], -1.0, 1.0)) / kDegToRad;
  } catch (const Error& e) {
    if (e.code != Err::InsufficientCoincidences) throw;
    c2_box = 2 * cfg.c2_box_deg;  // fall back to the nominal axis, wider box
  }

  // stage 2: coarse quadrupole orientation from splitting ellipsoids
  // (subsite-symmetrized means; crude but an adequate anneal seed)
  bool have_q = false;
  try {
    std::array<std::vector<Vec3>, 3> bs;
    std::array<std::vector<double>, 3> ds;
    std::map<std::tuple<int, int, int, int>, std::pair<Vec3, std::vector<double>>> grp;
    for (const auto& o : obs) {
      const int state = o.kind == 0 ? 1 : 0;
      if (state != cfg.target) continue;
      const int label = o.kind == 0 ? o.l : o.k;
      auto& e = grp[{o.scan, label, o.kind, o.k * 4 + o.l}];
      e.first = o.b_mt;
      e.second.push_back(o.offset_khz);
    }
    for (const auto& [key, e] : grp) {
      const int label = std::get<1>(key);
      double mean = 0;
      for (double v : e.second) mean += v;
      mean /= double(e.second.size());
      bs[label].push_back(e.first);
      ds[label].push_back(mean);
    }
    std::array<Mat3, 3> g;
    for (int k = 0; k < 3; ++k) g[k] = perturb::fit_ellipsoid(bs[k], ds[k]);
    init.q_abg_deg = perturb::estimate_q_orientation(g);
    have_q = true;
  } catch (const Error&) {
    have_q = false;  // fall through to the full search
  }

  // stage 3: anneal (orientation-seeded when available) + exact refine
  FitConfig acfg = cfg;
  acfg.c2_box_deg = c2_box;
  FitResult ares = anneal(base, obs, acfg, have_q ? &init : nullptr);
  FitConfig rcfg = cfg;
  rcfg.exact = true;
  FitResult res = refine(base, ares.params, obs, rcfg);
  res.evaluations += ares.evaluations;

  // stage 4: escalate to a longer full anneal if the basin is wrong
  if (res.rms_khz > cfg.escalate_rms_khz) {
    FitConfig ecfg = acfg;
    ecfg.seed = cfg.seed + 0x9e3779b97f4a7c15ull;
    ecfg.chains = cfg.chains * 2;
    FitResult a2 = anneal(base, obs, ecfg, &init);
    FitResult r2 = refine(base, a2.params, obs, rcfg);
    r2.evaluations += res.evaluations + a2.evaluations;
    r2.escalated = true;
    if (r2.rms_khz < res.rms_khz) return r2;
    res.escalated = true;
  }
  return res;
}

GaugeMatch canonical_match(const FitParams& fit, const FitParams& ref, double d_mhz,
                           double e_mhz) {
  const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  GaugeMatch best;
  best.angle_dev_deg = 1e300;
  best.g_rel_dev = 1e300;
  const Mat3 c2 = symmetry::c2_rotation(fit.c2_alpha_deg, fit.c2_beta_deg);
  for (int swap = 0; swap < 2; ++swap) {
    // subsite-blind data cannot tell which subsite is "1": conjugating both
    // tensors by the fitted C2 rotation relabels them and leaves every
    // predicted line set unchanged
    const Mat3 rq_fit =
        (swap ? c2 * euler::rotation(fit.q_abg_deg) : euler::rotation(fit.q_abg_deg)).eval();
    const Mat3 rm_fit =
        (swap ? c2 * euler::rotation(fit.m_abg_deg) : euler::rotation(fit.m_abg_deg)).eval();
    const Vec3 q_abg_fit = euler::angles_from(rq_fit);
    for (const auto& perm : perms) {
      // relabel the Zeeman principal axes: columns permuted, det kept positive
      Mat3 pmat = Mat3::Zero();
      for (int i = 0; i < 3; ++i) pmat(perm[i], i) = 1.0;
      Mat3 rm = rm_fit * pmat;
      if (rm.determinant() < 0) rm.col(2) *= -1;
      Vec3 gperm;
      for (int i = 0; i < 3; ++i) gperm[i] = fit.g_mhz_per_t[perm[i]];
      const Vec3 m_abg = euler::angles_from(rm);
      for (const auto& pat : symmetry::kSignPatterns) {
        const auto var = symmetry::sign_flip(q_abg_fit, d_mhz, e_mhz, gperm, m_abg, pat);
        double gdev = 0;
        for (int i = 0; i < 3; ++i)
          gdev = std::max(gdev, std::abs(var.g[i] - ref.g_mhz_per_t[i]) /
                                    std::max(std::abs(ref.g_mhz_per_t[i]), 1e-9));
        const double qdev = euler::alias_distance(var.q_abg_deg, ref.q_abg_deg, false);
        const double mdev = euler::alias_distance(m_abg, ref.m_abg_deg, false);
        // C2 axis antipode
        const double ca = fit.c2_alpha_deg, cb = fit.c2_beta_deg;
        const double c2dev = std::min(
            std::max(std::abs(euler::wrap_deg(ca - ref.c2_alpha_deg)),
                     std::abs(euler::wrap_deg(cb - ref.c2_beta_deg))),
            std::max(std::abs(euler::wrap_deg(ca + 180 - ref.c2_alpha_deg)),
                     std::abs(euler::wrap_deg(180 - cb - ref.c2_beta_deg))));
        const double adev = std::max({qdev, mdev, c2dev});
        const double score = std::max(adev, 50.0 * gdev);
        if (score < std::max(best.angle_dev_deg, 50.0 * best.g_rel_dev)) {
          best.angle_dev_deg = adev;
          best.g_rel_dev = gdev;
          best.params = fit;
          best.params.q_abg_deg = euler::nearest_alias(var.q_abg_deg, ref.q_abg_deg, false);
          best.params.m_abg_deg = euler::nearest_alias(m_abg, ref.m_abg_deg, false);
          best.params.g_mhz_per_t = var.g;
        }
      }
    }
  }
  return best;
}

}  // namespace hs::fitting

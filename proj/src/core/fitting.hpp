#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/common.hpp"
#include "core/model.hpp"

namespace hs::fitting {

// one measured line offset; subsite-blind: rows carry the pumped transition
// (ground label k, excited label l) but not which magnetic subsite they
// belong to.  kind 0 = hole (offset tracks the excited splitting, label l),
// kind 1 = antihole (ground splitting, label k)
struct Observation {
  int scan = 0;
  Vec3 b_mt = Vec3::Zero();
  int k = 0, l = 0;
  int kind = 0;
  double offset_khz = 0;
  double sigma_khz = 1;
};
using ObservationSet = std::vector<Observation>;

// exact-model offsets for every (scan point, transition, kind, subsite) with
// Gaussian position noise
ObservationSet synth_observations(const model::SiteModel& m, const std::vector<Vec3>& scan,
                                  const std::vector<std::pair<int, int>>& transitions,
                                  double noise_khz, std::uint64_t seed);

// header: scan_n,Bx_mT,By_mT,Bz_mT,k,l,kind,offset_khz,sigma_khz
std::string to_csv(const ObservationSet& obs);
ObservationSet from_csv(const std::string& text);

// the 11 free parameters of a one-state fit (D, E and the other state stay
// fixed at their zero-field / reference values)
struct FitParams {
  Vec3 q_abg_deg = Vec3::Zero();
  Vec3 m_abg_deg = Vec3::Zero();
  Vec3 g_mhz_per_t = Vec3::Zero();
  double c2_alpha_deg = 0, c2_beta_deg = 0;
};
extern const char* const kParamNames[11];
Eigen::VectorXd pack(const FitParams& p);
FitParams unpack(const Eigen::VectorXd& x);

// fitted state's params taken from `p`, everything else from `base`
model::SiteModel apply_params(const model::SiteModel& base, int target, const FitParams& p);
FitParams params_of(const model::SiteModel& m, int target);

enum class Assignment { Paired, Nearest };

struct FitConfig {
  int target = 0;                         // 0 ground, 1 excited
  Assignment assignment = Assignment::Paired;
  bool exact = false;                     // exact diagonalization in residuals
  double gate_khz = 30.0;                 // nearest-assignment match gate
  int chains = 6;                         // annealing chains
  double cool = 0.97;                     // geometric temperature factor
  double t_floor = 0.05;                  // stop at T = t_floor * T0
  double redraw_prob = 0.15;              // full random redraw probability per hop
  int polish_iters = 12;                  // LM iterations per hop
  int refine_iters = 40;
  double g_bound = 20.0;                  // |g| search bound, MHz/T
  double c2_box_deg = 4.0;                // +- box around the C2 axis estimate
  double stop_rms_khz = 0.0;              // early out when a basin reaches this (0 = off)
  double escalate_rms_khz = 4.0;          // bootstrap: full anneal when refine stays above
  double coincidence_tol_khz = 4.0;
  std::uint64_t seed = 1;
};

struct FitResult {
  FitParams params;
  double rms_khz = 0;   // unweighted nearest-assignment rms
  double chi2 = 0;      // weighted cost under cfg.assignment
  long evaluations = 0;
  bool escalated = false;
  Eigen::MatrixXd covariance;  // 11x11, filled by refine()
};

// weighted residuals of the 11-parameter model against the observations
// under cfg.assignment; Nearest caps each miss at gate_khz
std::vector<double> residuals(const model::SiteModel& base, const FitParams& p,
                              const ObservationSet& obs, const FitConfig& cfg);

// basin-hopping over the first-order objective: random restarts + Gaussian
// jumps, LM polish, Metropolis acceptance, geometric cooling
FitResult anneal(const model::SiteModel& base, const ObservationSet& obs, const FitConfig& cfg,
                 const FitParams* init = nullptr);

// local refinement (optionally exact model) + parameter covariance; throws
// SingularNormalMatrix naming the null-space directions when degenerate
FitResult refine(const model::SiteModel& base, const FitParams& start, const ObservationSet& obs,
                 const FitConfig& cfg);

// full pipeline: coincidence C2 estimate -> splitting-ellipsoid orientation
// estimate -> orientation-constrained anneal -> exact refine -> full anneal
// escalation if the residual stays above cfg.escalate_rms_khz
FitResult bootstrap_fit(const model::SiteModel& base, const ObservationSet& obs,
                        const FitConfig& cfg);

// gauge fixing: minimum-deviation member of the sign/axis-relabeling/alias/
// antipode/subsite-relabeling equivalence family of `fit`, measured against
// `ref`; all members predict identical subsite-blind line sets
struct GaugeMatch {
  FitParams params;
  double angle_dev_deg = 0;  // worst deviation over all nine angles
  double g_rel_dev = 0;      // worst relative principal-g deviation
};
GaugeMatch canonical_match(const FitParams& fit, const FitParams& ref, double d_mhz,
                           double e_mhz);

}  // namespace hs::fitting

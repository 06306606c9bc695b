#pragma once

#include <vector>

#include "core/common.hpp"
#include "core/model.hpp"

namespace hs::branching {

// relative oscillator strengths between zero-field doublets:
// entry (k, l) = Tr(Pg_k Pe_l) / 2, rows = ground labels, cols = excited,
// label order 1/2, 3/2, 5/2; rows and columns each sum to 1
Mat3 table(const Mat3& Qg, const Mat3& Qe);

// average of the two magnetic subsites
Mat3 site_table(const model::SiteModel& m);

// quenching parameters alpha with g = (1 - alpha) gN, gN the free-ion moment
Vec3 quenching_alphas(const Vec3& g_mhz_per_t, double gn_mhz_per_t = 10.56);

// one candidate assignment of sign-family members to the two states
struct Pairing {
  int ig, ie;      // indices into the sign-pattern enumeration
  double max_dev;  // worst |calc - measured| entry
  bool in_band;    // within the measurement error band
  Mat3 table;
};

// rank all ground x excited sign pairings against a measured table,
// ascending by max_dev (ties broken by enumeration order); the band is
// flagged rather than asserted to be a unique selector
std::vector<Pairing> select_solution(const model::SiteModel& m, const Mat3& measured,
                                     double band = 0.03, bool restrict_excited = false);

}  // namespace hs::branching

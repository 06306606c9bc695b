#pragma once

#include <array>
#include <vector>

#include "core/common.hpp"

namespace hs::perturb {

// linear response of one zero-field doublet: the field (T, lab frame) maps to
// a traceless 2x2 block with su(2) vector W.B (MHz); the first-order
// splitting is 2 |W.B|
struct SplitModel {
  std::array<Mat3, 3> w;  // by label 1/2, 3/2, 5/2; MHz/T
};

SplitModel split_model(const Mat3& Q, const Mat3& M);

// first-order splittings by label, kHz, B in mT
std::array<double, 3> first_order_split_khz(const SplitModel& sm, const Vec3& b_mt);

// splitting ellipsoid G = W^T W: delta = 2 sqrt(B^T G B); principal
// square-root values are the direction response coefficients, MHz/T
std::array<Mat3, 3> ellipsoids(const SplitModel& sm);
std::array<Vec3, 3> response_coefficients(const SplitModel& sm);

// least-squares ellipsoid recovery from measured splittings
Mat3 fit_ellipsoid(const std::vector<Vec3>& b_mt, const std::vector<double>& delta_khz);

// coarse quadrupole orientation from fitted ellipsoids: dominant axis of the
// 5/2 doublet ~ quadrupole z, dominant axis of the 1/2 doublet ~ x
Vec3 estimate_q_orientation(const std::array<Mat3, 3>& g_by_label);

// scan points carrying the offset lists of the two (unlabeled) subsite rows
struct SubsitePoint {
  Vec3 b_mt;
  std::vector<double> a_khz, b_khz;
};

// C2 axis direction from near-coincident subsite spectra: coincident points
// lie in the plane normal to the axis; returns a unit vector
Vec3 estimate_c2_axis(const std::vector<SubsitePoint>& pts, double tol_khz);

}  // namespace hs::perturb

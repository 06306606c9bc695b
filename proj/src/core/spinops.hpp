#pragma once

#include <array>

#include "core/common.hpp"

namespace hs::spinops {

// spin-5/2 operators in the m = +5/2 ... -5/2 basis
const Mat6c& ix();
const Mat6c& iy();
const Mat6c& iz();
const Mat6c& op(int axis);

// H = I.Q.I + (B.M).I with B in mT, Q in MHz, M in MHz/T; result in MHz
Mat6c hamiltonian(const Mat3& Q, const Mat3& M, const Vec3& b_mt);

struct LevelSet {
  Vec6 energies_mhz;                    // ascending
  Eigen::Matrix<Cplx, 6, 6> states;     // columns match energies
  std::array<double, 3> split_khz;      // intra-doublet splittings, energy order
  std::array<double, 2> gap_mhz;        // inter-doublet gaps
};

// diagonalize and group into three quasi-degenerate doublets; throws
// DegeneracyAmbiguous when the smallest inter-doublet gap is less than
// 10x the largest intra-doublet splitting
LevelSet levels(const Mat6c& H);

// principal axis of the largest-|value| quadrupole eigenvalue
Vec3 quad_axis(const Mat3& Q);

// doublet labels from <(n.I)^2> over each zero-field doublet, ascending:
// rank 0 ~ |m|=1/2, 1 ~ 3/2, 2 ~ 5/2.  pair_of_label[label] = energy-order
// pair index into the zero-field LevelSet.
std::array<int, 3> pair_of_label(const Mat3& Q);

// zero-field doublet splittings under field, by label (1/2, 3/2, 5/2), exact
std::array<double, 3> exact_split_khz(const Mat3& Q, const Mat3& M, const Vec3& b_mt,
                                      const std::array<int, 3>& pair_of_label);

}  // namespace hs::spinops

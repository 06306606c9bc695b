#include "core/spinops.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace hs::spinops {

namespace {

struct Ops {
  Mat6c x, y, z;
  Ops() {
    x.setZero();
    y.setZero();
    z.setZero();
    Mat6c ip = Mat6c::Zero();
    for (int r = 1; r < kDim; ++r) {
      const double m = kSpin - r;  // raising connects |m> to |m+1>
      ip(r - 1, r) = std::sqrt(kSpin * (kSpin + 1) - m * (m + 1));
    }
    const Mat6c im = ip.adjoint();
    x = 0.5 * (ip + im);
    y = Cplx(0, -0.5) * (ip - im);
    for (int r = 0; r < kDim; ++r) z(r, r) = kSpin - r;
  }
};

const Ops& ops() {
  static const Ops o;
  return o;
}

}  // namespace

const Mat6c& ix() { return ops().x; }
const Mat6c& iy() { return ops().y; }
const Mat6c& iz() { return ops().z; }
const Mat6c& op(int axis) { return axis == 0 ? ops().x : axis == 1 ? ops().y : ops().z; }

Mat6c hamiltonian(const Mat3& Q, const Mat3& M, const Vec3& b_mt) {
  Mat6c h = Mat6c::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (Q(a, b) != 0.0) h += Q(a, b) * (op(a) * op(b));
  const Vec3 f = M.transpose() * (b_mt * 1e-3);  // effective field, MHz
  for (int a = 0; a < 3; ++a) h += f[a] * op(a);
  return h;
}

LevelSet levels(const Mat6c& H) {
  Eigen::SelfAdjointEigenSolver<Mat6c> es(H);
  if (es.info() != Eigen::Success) throw Error(Err::IllConditioned, "6x6 eigensolve failed");
  LevelSet ls;
  ls.energies_mhz = es.eigenvalues();
  ls.states = es.eigenvectors();
  double max_split = 0;
  for (int p = 0; p < 3; ++p) {
    ls.split_khz[p] = (ls.energies_mhz[2 * p + 1] - ls.energies_mhz[2 * p]) * 1e3;
    max_split = std::max(max_split, ls.split_khz[p]);
  }
  double min_gap = 1e300;
  for (int p = 0; p < 2; ++p) {
    ls.gap_mhz[p] = ls.energies_mhz[2 * p + 2] - ls.energies_mhz[2 * p + 1];
    min_gap = std::min(min_gap, ls.gap_mhz[p]);
  }
  if (min_gap * 1e3 < std::max(10.0 * max_split, 1e-9))
    throw Error(Err::DegeneracyAmbiguous,
                "inter-doublet gap below 10x intra-doublet splitting; pairing undefined");
  return ls;
}

Vec3 quad_axis(const Mat3& Q) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(Q);
  int k = 0;
  es.eigenvalues().cwiseAbs().maxCoeff(&k);
  return es.eigenvectors().col(k);
}

std::array<int, 3> pair_of_label(const Mat3& Q) {
  const LevelSet ls = levels(hamiltonian(Q, Mat3::Zero(), Vec3::Zero()));
  const Vec3 n = quad_axis(Q);
  const Mat6c ni = n[0] * ix() + n[1] * iy() + n[2] * iz();
  const Mat6c ni2 = ni * ni;
  std::array<double, 3> m2{};
  for (int p = 0; p < 3; ++p) {
    Cplx tr = 0;
    for (int c = 2 * p; c < 2 * p + 2; ++c) tr += (ls.states.col(c).adjoint() * ni2 * ls.states.col(c))(0);
    m2[p] = 0.5 * tr.real();
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return m2[a] < m2[b]; });
  return order;  // order[label] = pair index
}

std::array<double, 3> exact_split_khz(const Mat3& Q, const Mat3& M, const Vec3& b_mt,
                                      const std::array<int, 3>& pair_of_label) {
  const LevelSet ls = levels(hamiltonian(Q, M, b_mt));
  return {ls.split_khz[pair_of_label[0]], ls.split_khz[pair_of_label[1]],
          ls.split_khz[pair_of_label[2]]};
}

}  // namespace hs::spinops

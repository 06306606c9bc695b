#include "core/perturb.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "core/euler.hpp"
#include "core/spinops.hpp"

namespace hs::perturb {

SplitModel split_model(const Mat3& Q, const Mat3& M) {
  using spinops::hamiltonian;
  const auto ls = spinops::levels(hamiltonian(Q, Mat3::Zero(), Vec3::Zero()));
  const auto pol = spinops::pair_of_label(Q);
  SplitModel sm;
  for (int label = 0; label < 3; ++label) {
    const int p = pol[label];
    const auto u = ls.states.col(2 * p), v = ls.states.col(2 * p + 1);
    Mat3 a;  // column j: su(2) vector of the doublet block of I_j
    for (int j = 0; j < 3; ++j) {
      const Mat6c& ij = spinops::op(j);
      const Cplx kuu = (u.adjoint() * ij * u)(0), kvv = (v.adjoint() * ij * v)(0);
      const Cplx kuv = (u.adjoint() * ij * v)(0);
      a(0, j) = kuv.real();
      a(1, j) = -kuv.imag();
      a(2, j) = 0.5 * (kuu.real() - kvv.real());
    }
    sm.w[label] = a * M.transpose();
  }
  return sm;
}

std::array<double, 3> first_order_split_khz(const SplitModel& sm, const Vec3& b_mt) {
  std::array<double, 3> d{};
  for (int k = 0; k < 3; ++k) d[k] = 2.0 * (sm.w[k] * b_mt).norm();  // mT * MHz/T = kHz
  return d;
}

std::array<Mat3, 3> ellipsoids(const SplitModel& sm) {
  std::array<Mat3, 3> g;
  for (int k = 0; k < 3; ++k) g[k] = sm.w[k].transpose() * sm.w[k];
  return g;
}

std::array<Vec3, 3> response_coefficients(const SplitModel& sm) {
  std::array<Vec3, 3> c;
  for (int k = 0; k < 3; ++k) {
    Eigen::JacobiSVD<Mat3> svd(sm.w[k]);
    c[k] = svd.singularValues();
  }
  return c;
}

Mat3 fit_ellipsoid(const std::vector<Vec3>& b_mt, const std::vector<double>& delta_khz) {
  if (b_mt.size() != delta_khz.size() || b_mt.size() < 6)
    throw Error(Err::BadArgument, "ellipsoid fit needs >= 6 matched samples");
  // delta^2 = 4 B^T G B, linear in the six unique components of G
  Eigen::MatrixXd x(b_mt.size(), 6);
  Eigen::VectorXd y(b_mt.size());
  for (size_t i = 0; i < b_mt.size(); ++i) {
    const Vec3& b = b_mt[i];
    x.row(i) << b[0] * b[0], b[1] * b[1], b[2] * b[2], 2 * b[0] * b[1], 2 * b[0] * b[2],
        2 * b[1] * b[2];
    x.row(i) *= 4.0;
    y[i] = delta_khz[i] * delta_khz[i];
  }
  const Eigen::MatrixXd xtx = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xtx);
  const double cond = es.eigenvalues()(5) / std::max(es.eigenvalues()(0), 0.0);
  if (!(es.eigenvalues()(0) > 0) || cond > 1e12)
    throw Error(Err::IllConditioned, "ellipsoid normal matrix is ill-conditioned");
  const Eigen::VectorXd c = xtx.ldlt().solve(x.transpose() * y);
  Mat3 g;
  g << c[0], c[3], c[4], c[3], c[1], c[5], c[4], c[5], c[2];
  return g;
}

Vec3 estimate_q_orientation(const std::array<Mat3, 3>& g_by_label) {
  auto top_axis = [](const Mat3& g) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(g);
    const auto& ev = es.eigenvalues();
    if (!(ev(2) > 1e-12)) throw Error(Err::IllConditioned, "degenerate splitting ellipsoid");
    return Vec3(es.eigenvectors().col(2));
  };
  Vec3 z = top_axis(g_by_label[2]);  // 5/2 doublet tracks the quadrupole z axis
  Vec3 x = top_axis(g_by_label[0]);  // 1/2 doublet tracks the x axis
  x -= x.dot(z) * z;
  if (x.norm() < 1e-6) throw Error(Err::IllConditioned, "parallel ellipsoid axes");
  x.normalize();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return euler::angles_from(r);
}

Vec3 estimate_c2_axis(const std::vector<SubsitePoint>& pts, double tol_khz) {
  std::vector<Vec3> inplane;
  for (const auto& p : pts) {
    if (p.a_khz.size() != p.b_khz.size() || p.a_khz.empty()) continue;
    std::vector<double> a = p.a_khz, b = p.b_khz;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> d(a.size());
    for (size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    if (d[d.size() / 2] < tol_khz) inplane.push_back(p.b_mt.normalized());
  }
  if (inplane.size() < 4)
    throw Error(Err::InsufficientCoincidences,
                "need at least 4 coincident scan points to fix the axis plane");
  // smallest principal direction of the coincident field directions = normal;
  // one rejection pass drops along-axis coincidences and false positives
  auto normal_of = [](const std::vector<Vec3>& v) {
    Eigen::MatrixXd m(v.size(), 3);
    for (size_t i = 0; i < v.size(); ++i) m.row(i) = v[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    return Vec3(svd.matrixV().col(2));
  };
  Vec3 n = normal_of(inplane);
  std::vector<Vec3> kept;
  for (const auto& v : inplane)
    if (std::abs(n.dot(v)) < 0.2) kept.push_back(v);
  if (kept.size() >= 4) n = normal_of(kept);
  return n;
}

}  // namespace hs::perturb

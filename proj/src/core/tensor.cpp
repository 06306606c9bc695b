#include "core/tensor.hpp"

#include <Eigen/Eigenvalues>

#include "core/euler.hpp"

namespace hs::tensor {

Mat3 from_principal(const Vec3& pvals, const Vec3& abg_deg) {
  const Mat3 r = euler::rotation(abg_deg);
  return r * pvals.asDiagonal() * r.transpose();
}

Mat3 quadrupole(double d_mhz, double e_mhz, const Vec3& abg_deg) {
  return from_principal(Vec3(-e_mhz, e_mhz, d_mhz), abg_deg);
}

Mat3 zeeman(const Vec3& g_mhz_per_t, const Vec3& abg_deg) {
  return from_principal(g_mhz_per_t, abg_deg);
}

Principal principal(const Mat3& X) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(X);
  if (es.info() != Eigen::Success) throw Error(Err::IllConditioned, "3x3 eigensolve failed");
  Principal p{es.eigenvalues(), es.eigenvectors()};
  if (p.axes.determinant() < 0) p.axes.col(2) *= -1.0;
  return p;
}

}  // namespace hs::tensor

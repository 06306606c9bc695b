#include "core/symmetry.hpp"

#include <cmath>

#include "core/euler.hpp"
#include "core/tensor.hpp"

namespace hs::symmetry {

const std::array<std::array<int, 3>, 8> kSignPatterns = {{{+1, +1, +1},
                                                          {-1, +1, +1},
                                                          {+1, -1, +1},
                                                          {+1, +1, -1},
                                                          {-1, +1, -1},
                                                          {+1, -1, -1},
                                                          {-1, -1, +1},
                                                          {-1, -1, -1}}};

Mat3 c2_rotation(double alpha_deg, double beta_deg) {
  const Mat3 r = euler::rotation(alpha_deg, beta_deg, 0.0);
  return r.transpose() * euler::rot_z(180.0) * r;
}

Vec3 c2_axis(double alpha_deg, double beta_deg) {
  const double a = alpha_deg * kDegToRad, b = beta_deg * kDegToRad;
  return {std::sin(b) * std::cos(a), std::sin(b) * std::sin(a), std::cos(b)};
}

Mat3 subsite_partner(const Mat3& X, const Mat3& c2) { return c2 * X * c2.transpose(); }

Mat3 to_crystal_frame(const Mat3& x_lab, const Vec3& frame_abg_deg) {
  const Mat3 r = euler::rotation(frame_abg_deg);
  return r * x_lab * r.transpose();
}

SignVariant sign_flip(const Vec3& q_abg_deg, double d_mhz, double e_mhz, const Vec3& g,
                      const Vec3& m_abg_deg, const std::array<int, 3>& pattern) {
  const Mat3 rm = euler::rotation(m_abg_deg);
  Vec3 p;
  for (int i = 0; i < 3; ++i) p[i] = pattern[i];
  const Mat3 s = rm * p.asDiagonal() * rm.transpose();

  SignVariant v;
  v.pattern = pattern;
  v.g = g.cwiseProduct(p);
  v.M = rm * v.g.asDiagonal() * rm.transpose();  // = S M (symmetric: S, M share axes)
  v.Q = s * tensor::quadrupole(d_mhz, e_mhz, q_abg_deg) * s.transpose();
  Mat3 rq = s * euler::rotation(q_abg_deg);
  if (rq.determinant() < 0) rq = -rq;
  v.q_abg_deg = euler::angles_from(rq);
  return v;
}

std::vector<SignVariant> enumerate_solutions(const Vec3& q_abg_deg, double d_mhz,
                                             double e_mhz, const Vec3& g,
                                             const Vec3& m_abg_deg) {
  std::vector<SignVariant> out;
  out.reserve(8);
  for (const auto& p : kSignPatterns)
    out.push_back(sign_flip(q_abg_deg, d_mhz, e_mhz, g, m_abg_deg, p));
  return out;
}

}  // namespace hs::symmetry

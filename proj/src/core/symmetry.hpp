#pragma once

#include <array>
#include <vector>

#include "core/common.hpp"

namespace hs::symmetry {

// two-fold rotation about the axis (sin b cos a, sin b sin a, cos b), degrees
Mat3 c2_rotation(double alpha_deg, double beta_deg);
Vec3 c2_axis(double alpha_deg, double beta_deg);

// companion magnetic subsite tensor: X2 = C X1 C^T
Mat3 subsite_partner(const Mat3& X, const Mat3& c2);

// express a lab-frame tensor in the crystal frame fixed by (alpha, beta, gamma)
Mat3 to_crystal_frame(const Mat3& x_lab, const Vec3& frame_abg_deg);

// one member of the spectrum-preserving sign family: principal g values are
// negated per `pattern`, the quadrupole tensor is conjugated by
// S = R_M diag(pattern) R_M^T, and the Zeeman orientation is unchanged
struct SignVariant {
  std::array<int, 3> pattern;  // +1 / -1 per Zeeman principal axis
  Vec3 g;                      // signed principal values, MHz/T
  Vec3 q_abg_deg;              // quadrupole orientation after conjugation
  Mat3 Q;                      // conjugated quadrupole tensor
  Mat3 M;                      // Zeeman tensor with the signed values (same axes)
};

SignVariant sign_flip(const Vec3& q_abg_deg, double d_mhz, double e_mhz, const Vec3& g,
                      const Vec3& m_abg_deg, const std::array<int, 3>& pattern);

// the eight sign variants, in the fixed enumeration order
// (+,+,+),(-,+,+),(+,-,+),(+,+,-),(-,+,-),(+,-,-),(-,-,+),(-,-,-)
std::vector<SignVariant> enumerate_solutions(const Vec3& q_abg_deg, double d_mhz,
                                             double e_mhz, const Vec3& g,
                                             const Vec3& m_abg_deg);

extern const std::array<std::array<int, 3>, 8> kSignPatterns;

}  // namespace hs::symmetry

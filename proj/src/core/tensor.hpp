#pragma once

#include "core/common.hpp"

namespace hs::tensor {

// symmetric lab-frame tensor X = R diag(pvals) R^T with R = euler::rotation(abg)
Mat3 from_principal(const Vec3& pvals, const Vec3& abg_deg);

// quadrupole tensor, principal values (-E, E, D), MHz
Mat3 quadrupole(double d_mhz, double e_mhz, const Vec3& abg_deg);

// effective Zeeman tensor, principal values (g1, g2, g3), MHz/T
Mat3 zeeman(const Vec3& g_mhz_per_t, const Vec3& abg_deg);

struct Principal {
  Vec3 values;  // ascending
  Mat3 axes;    // columns, det = +1
};

// eigen-decomposition with a proper-rotation axes matrix
Principal principal(const Mat3& X);

}  // namespace hs::tensor

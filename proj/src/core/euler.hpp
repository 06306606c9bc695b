#pragma once

#include <vector>

#include "core/common.hpp"

namespace hs::euler {

// active z-y-z convention: rotation(a,b,g) = rot_z(g) * rot_y(b) * rot_z(a), degrees
Mat3 rot_z(double deg);
Mat3 rot_y(double deg);
Mat3 rotation(double alpha, double beta, double gamma);
Mat3 rotation(const Vec3& abg);

// wrap to (-180, 180]
double wrap_deg(double a);

// canonical triple: beta in [0, 180], alpha/gamma in (-180, 180]
Vec3 canonical(const Vec3& abg);

// extract canonical angles; gimbal-locked rows (beta = 0 or 180) report gamma = 0
Vec3 angles_from(const Mat3& R);

// triples describing the same principal-axis frame: proper sign flips of two
// axes, optionally the x/y exchange (valid when the two transverse principal
// values may trade places)
std::vector<Vec3> aliases(const Vec3& abg, bool axis_swap);

// alias of `abg` closest to `ref` under the max-component wrapped metric;
// `ref` is canonicalized before comparison
Vec3 nearest_alias(const Vec3& abg, const Vec3& ref, bool axis_swap);
double alias_distance(const Vec3& abg, const Vec3& ref, bool axis_swap);

}  // namespace hs::euler

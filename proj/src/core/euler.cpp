#include "core/euler.hpp"

#include <cmath>

namespace hs::euler {

Mat3 rot_z(double deg) {
  const double c = std::cos(deg * kDegToRad), s = std::sin(deg * kDegToRad);
  Mat3 r;
  r << c, s, 0, -s, c, 0, 0, 0, 1;
  return r;
}

Mat3 rot_y(double deg) {
  const double c = std::cos(deg * kDegToRad), s = std::sin(deg * kDegToRad);
  Mat3 r;
  r << c, 0, -s, 0, 1, 0, s, 0, c;
  return r;
}

Mat3 rotation(double alpha, double beta, double gamma) {
  return rot_z(gamma) * rot_y(beta) * rot_z(alpha);
}

Mat3 rotation(const Vec3& abg) { return rotation(abg[0], abg[1], abg[2]); }

double wrap_deg(double a) {
  a = std::fmod(a, 360.0);
  if (a <= -180.0) a += 360.0;
  if (a > 180.0) a -= 360.0;
  return a;
}

Vec3 canonical(const Vec3& abg) {
  double a = abg[0], b = wrap_deg(abg[1]), g = abg[2];
  if (b < 0) {  // rot_y(-b) = rot_z(180) rot_y(b) rot_z(180)
    a += 180.0;
    b = -b;
    g += 180.0;
  }
  return {wrap_deg(a), b, wrap_deg(g)};
}

Vec3 angles_from(const Mat3& R) {
  const double rxy = std::hypot(R(2, 0), R(2, 1));
  const double rad2deg = 1.0 / kDegToRad;
  if (rxy < 1e-12) {  // gimbal: only alpha +/- gamma defined, pin gamma = 0
    if (R(2, 2) > 0) return {std::atan2(R(0, 1), R(0, 0)) * rad2deg, 0.0, 0.0};
    return {std::atan2(-R(0, 1), -R(0, 0)) * rad2deg, 180.0, 0.0};
  }
  const double beta = std::atan2(rxy, R(2, 2)) * rad2deg;
  const double alpha = std::atan2(R(2, 1), R(2, 0)) * rad2deg;
  const double gamma = std::atan2(R(1, 2), -R(0, 2)) * rad2deg;
  return {alpha, beta, gamma};
}

namespace {

const std::vector<Mat3>& alias_group(bool axis_swap) {
  auto make = [](bool with_swap) {
    std::vector<Mat3> g;
    const double sx[4] = {1, 1, -1, -1}, sy[4] = {1, -1, 1, -1};
    for (int i = 0; i < 4; ++i) {
      Mat3 s = Mat3::Zero();
      s(0, 0) = sx[i];
      s(1, 1) = sy[i];
      s(2, 2) = sx[i] * sy[i];  // keep det = +1
      g.push_back(s);
      if (with_swap) {
        Mat3 sw;
        sw << 0, 1, 0, 1, 0, 0, 0, 0, -1;  // x/y exchange, det = +1
        g.push_back(s * sw);
      }
    }
    return g;
  };
  static const std::vector<Mat3> plain = make(false);
  static const std::vector<Mat3> swapped = make(true);
  return axis_swap ? swapped : plain;
}

double triple_dist(const Vec3& a, const Vec3& b) {
  double d = 0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(wrap_deg(a[i] - b[i])));
  return d;
}

}  // namespace

std::vector<Vec3> aliases(const Vec3& abg, bool axis_swap) {
  const Mat3 R = rotation(abg);
  std::vector<Vec3> out;
  for (const Mat3& s : alias_group(axis_swap)) out.push_back(angles_from(R * s));
  return out;
}

Vec3 nearest_alias(const Vec3& abg, const Vec3& ref, bool axis_swap) {
  const Vec3 cref = canonical(ref);  // comparisons need both triples canonical
  Vec3 best = canonical(abg);
  double bd = triple_dist(best, cref);
  for (const Vec3& c : aliases(abg, axis_swap)) {
    const double d = triple_dist(c, cref);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  return best;
}

double alias_distance(const Vec3& abg, const Vec3& ref, bool axis_swap) {
  return triple_dist(nearest_alias(abg, ref, axis_swap), canonical(ref));
}

}  // namespace hs::euler

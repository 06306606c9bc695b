#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace hs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Cplx = std::complex<double>;
using Mat6c = Eigen::Matrix<Cplx, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;

// nuclear spin quantum number of both 151Eu3+ hyperfine manifolds
inline constexpr double kSpin = 2.5;
inline constexpr int kDim = 6;

enum class Err {
  Ok = 0,
  BadArgument,
  DegeneracyAmbiguous,
  IllConditioned,
  InsufficientCoincidences,
  SingularNormalMatrix,
  NyquistViolation,
  ParseError,
  IoError,
  FitFailed,
};

struct Error : std::runtime_error {
  Err code;
  Error(Err c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

}  // namespace hs

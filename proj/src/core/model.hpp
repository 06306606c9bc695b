#pragma once

#include <string>

#include "core/common.hpp"

namespace hs::model {

// one electronic state's effective nuclear-spin tensors
struct StateModel {
  double d_mhz = 0, e_mhz = 0;  // quadrupole principal values (-E, E, D)
  Vec3 q_abg_deg = Vec3::Zero();
  Vec3 g_mhz_per_t = Vec3::Zero();
  Vec3 m_abg_deg = Vec3::Zero();

  Mat3 Q() const;
  Mat3 M() const;
};

// ground + excited tensors in the lab frame plus the crystal-frame rotation;
// frame alpha/beta fix the C2 axis direction, gamma the in-plane orientation
struct SiteModel {
  StateModel ground, excited;
  Vec3 frame_abg_deg = Vec3::Zero();

  Mat3 c2() const;
  Vec3 c2_axis() const;
  const StateModel& state(int target) const { return target == 0 ? ground : excited; }
  // subsite tensors: s = 0 as given, s = 1 the C2 partner
  Mat3 Q(int target, int subsite) const;
  Mat3 M(int target, int subsite) const;
};

SiteModel from_json_text(const std::string& text);
std::string to_json_text(const SiteModel& m);
SiteModel load(const std::string& path);   // throws ParseError / IoError
void save(const SiteModel& m, const std::string& path);

}  // namespace hs::model

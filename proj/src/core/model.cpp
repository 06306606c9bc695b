#include "core/model.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "core/symmetry.hpp"
#include "core/tensor.hpp"

namespace hs::model {

using nlohmann::json;

Mat3 StateModel::Q() const { return tensor::quadrupole(d_mhz, e_mhz, q_abg_deg); }
Mat3 StateModel::M() const { return tensor::zeeman(g_mhz_per_t, m_abg_deg); }

Mat3 SiteModel::c2() const { return symmetry::c2_rotation(frame_abg_deg[0], frame_abg_deg[1]); }
Vec3 SiteModel::c2_axis() const { return symmetry::c2_axis(frame_abg_deg[0], frame_abg_deg[1]); }

Mat3 SiteModel::Q(int target, int subsite) const {
  const Mat3 q = state(target).Q();
  return subsite == 0 ? q : symmetry::subsite_partner(q, c2());
}

Mat3 SiteModel::M(int target, int subsite) const {
  const Mat3 m = state(target).M();
  return subsite == 0 ? m : symmetry::subsite_partner(m, c2());
}

namespace {

Vec3 vec3_of(const json& j, const char* key) {
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3)
    throw Error(Err::ParseError, std::string("expected 3-element array for ") + key);
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

StateModel state_of(const json& j) {
  StateModel s;
  s.d_mhz = j.at("D_mhz").get<double>();
  s.e_mhz = j.at("E_mhz").get<double>();
  s.q_abg_deg = vec3_of(j, "q_angles_deg");
  s.g_mhz_per_t = vec3_of(j, "g_mhz_per_T");
  s.m_abg_deg = vec3_of(j, "m_angles_deg");
  return s;
}

json state_json(const StateModel& s) {
  return json{{"D_mhz", s.d_mhz},
              {"E_mhz", s.e_mhz},
              {"q_angles_deg", {s.q_abg_deg[0], s.q_abg_deg[1], s.q_abg_deg[2]}},
              {"g_mhz_per_T", {s.g_mhz_per_t[0], s.g_mhz_per_t[1], s.g_mhz_per_t[2]}},
              {"m_angles_deg", {s.m_abg_deg[0], s.m_abg_deg[1], s.m_abg_deg[2]}}};
}

}  // namespace

SiteModel from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& ex) {
    throw Error(Err::ParseError, std::string("model json: ") + ex.what());
  }
  try {
    SiteModel m;
    m.ground = state_of(j.at("ground"));
    m.excited = state_of(j.at("excited"));
    m.frame_abg_deg = vec3_of(j, "frame_angles_deg");
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(Err::ParseError, std::string("model json: ") + ex.what());
  }
}

std::string to_json_text(const SiteModel& m) {
  json j{{"ground", state_json(m.ground)},
         {"excited", state_json(m.excited)},
         {"frame_angles_deg", {m.frame_abg_deg[0], m.frame_abg_deg[1], m.frame_abg_deg[2]}}};
  return j.dump(2) + "\n";
}

SiteModel load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::IoError, "cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void save(const SiteModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Err::IoError, "cannot write model file: " + path);
  out << to_json_text(m);
}

}  // namespace hs::model

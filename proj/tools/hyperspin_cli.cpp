// hyperspin CLI: spectra synthesis, tensor fitting, and solution diagnostics
// for I = 5/2 hyperfine models.  Links only the public C API.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <string>
#include <vector>

#include "hyperspin.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitFit = 4;

struct CliError {
  int code;
  std::string msg;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw CliError{code, msg}; }

void require_ok(int rc, int exit_code) {
  if (rc != HS_OK) fail(exit_code, hs_last_error());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// atomic write: temp file in the same directory, then rename
void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "w");
  if (!f) fail(kExitConfig, "cannot write " + tmp);
  if (std::fwrite(text.data(), 1, text.size(), f) != text.size()) {
    std::fclose(f);
    std::remove(tmp.c_str());
    fail(kExitConfig, "short write to " + tmp);
  }
  std::fclose(f);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(kExitConfig, "cannot rename into " + path);
  }
}

std::string iso_now() {
  char buf[32];
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// run metadata carries the only timestamp in any output
void write_metadata(const std::string& outdir, const std::string& command, uint64_t seed) {
  std::string j = "{\n";
  j += "  \"tool\": \"" + std::string(hs_version()) + "\",\n";
  j += "  \"command\": \"" + command + "\",\n";
  j += "  \"seed\": " + std::to_string(seed) + ",\n";
  j += "  \"timestamp\": \"" + iso_now() + "\"\n}\n";
  write_file(outdir + "/metadata.json", j);
}

struct ScanSpec {
  double bx = 10, by = 10, bz = 5;
  int n = 200;
};

ScanSpec parse_scan(const std::string& s) {
  ScanSpec sp;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%d", &sp.bx, &sp.by, &sp.bz, &sp.n) != 4 || sp.n < 2)
    fail(kExitConfig, "--scan expects Bx,By,Bz,N with N >= 2");
  return sp;
}

std::pair<int, int> parse_transition(const std::string& s) {
  int k = 0, l = 0;
  if (std::sscanf(s.c_str(), "%d,%d", &k, &l) != 2 || k < 0 || k > 2 || l < 0 || l > 2)
    fail(kExitConfig, "--transition expects k,l with labels 0..2");
  return {k, l};
}

struct ModelHandle {
  hs_model* m = nullptr;
  ~ModelHandle() { hs_model_free(m); }
};

void load_model(const std::string& path, ModelHandle& h) {
  if (path.empty()) fail(kExitConfig, "--model is required");
  require_ok(hs_model_load(path.c_str(), &h.m), kExitModel);
}

std::vector<double> scan_points(const ScanSpec& sp, const ModelHandle& m, bool crystal) {
  std::vector<double> xyz(3 * sp.n);
  require_ok(hs_spiral_scan(sp.bx, sp.by, sp.bz, sp.n, xyz.data()), kExitConfig);
  if (crystal) {  // spiral given in crystal axes: map every point to the lab frame
    for (int i = 0; i < sp.n; ++i) {
      double out[3];
      require_ok(hs_frame_vector(m.m, &xyz[3 * i], out, 0), kExitModel);
      for (int j = 0; j < 3; ++j) xyz[3 * i + j] = out[j];
    }
  }
  return xyz;
}

int run_synth(const std::string& model, const std::string& outdir, const ScanSpec& scan,
              const std::vector<std::string>& transitions, double noise, uint64_t seed,
              bool crystal, const std::string& command) {
  ModelHandle m;
  load_model(model, m);
  const std::vector<double> xyz = scan_points(scan, m, crystal);
  std::vector<int> kl;
  if (transitions.empty()) {
    kl = {0, 0, 1, 1, 2, 2};
  } else {
    for (const auto& t : transitions) {
      const auto [k, l] = parse_transition(t);
      kl.push_back(k);
      kl.push_back(l);
    }
  }
  hs_observations* obs = nullptr;
  require_ok(hs_observations_synth(m.m, xyz.data(), size_t(scan.n), kl.data(), kl.size() / 2,
                                   noise, seed, &obs),
             kExitModel);
  size_t need = 0;
  hs_observations_to_csv(obs, nullptr, 0, &need);
  std::string csv(need, '\0');
  require_ok(hs_observations_to_csv(obs, csv.data(), csv.size(), &need), kExitModel);
  csv.resize(need - 1);
  hs_observations_free(obs);
  write_file(outdir + "/observations.csv", csv);
  write_metadata(outdir, command, seed);
  std::printf("wrote %s/observations.csv (%d points)\n", outdir.c_str(), scan.n);
  return 0;
}

int run_fit(const std::string& model, const std::string& outdir, const std::string& obs_path,
            const std::string& target, uint64_t seed, int chains, double stop_rms,
            double escalate_rms, const std::string& command) {
  ModelHandle m;
  load_model(model, m);
  std::FILE* f = std::fopen(obs_path.c_str(), "r");
  if (!f) fail(kExitConfig, "cannot open observations: " + obs_path);
  std::string text;
  char buf[65536];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  std::fclose(f);
  hs_observations* obs = nullptr;
  require_ok(hs_observations_from_csv(text.c_str(), &obs), kExitConfig);

  hs_fit_options opt;
  hs_fit_options_init(&opt);
  opt.target = target == "excited" ? 1 : 0;
  opt.seed = seed;
  if (chains > 0) opt.chains = chains;
  opt.stop_rms_khz = stop_rms;
  if (escalate_rms > 0) opt.escalate_rms_khz = escalate_rms;

  hs_fit_result* res = nullptr;
  const int rc = hs_bootstrap_fit(m.m, obs, &opt, &res);
  hs_observations_free(obs);
  require_ok(rc, kExitFit);

  double params[11], rms = 0, chi2 = 0;
  long evals = 0;
  int escalated = 0;
  hs_fit_result_params(res, params);
  hs_fit_result_stats(res, &rms, &chi2, &evals, &escalated);
  hs_model* fitted = nullptr;
  require_ok(hs_fit_result_model(res, &fitted), kExitFit);
  size_t need = 0;
  hs_model_to_json(fitted, nullptr, 0, &need);
  std::string mj(need, '\0');
  hs_model_to_json(fitted, mj.data(), mj.size(), &need);
  mj.resize(need - 1);
  hs_model_free(fitted);
  hs_fit_result_free(res);

  write_file(outdir + "/fitted_model.json", mj);
  static const char* names[11] = {"q_alpha", "q_beta", "q_gamma", "m_alpha", "m_beta", "m_gamma",
                                  "g1",      "g2",     "g3",      "c2_alpha", "c2_beta"};
  std::string rep = "{\n  \"target\": \"" + target + "\",\n  \"rms_khz\": " + fmt(rms) +
                    ",\n  \"chi2\": " + fmt(chi2) + ",\n  \"evaluations\": " +
                    std::to_string(evals) + ",\n  \"escalated\": " +
                    (escalated ? "true" : "false") + ",\n  \"params\": {\n";
  for (int i = 0; i < 11; ++i)
    rep += std::string("    \"") + names[i] + "\": " + fmt(params[i]) +
           (i + 1 < 11 ? ",\n" : "\n");
  rep += "  }\n}\n";
  write_file(outdir + "/fit_report.json", rep);
  write_metadata(outdir, command, seed);
  std::printf("fit rms %.6g kHz after %ld evaluations%s\n", rms, evals,
              escalated ? " (escalated)" : "");
  return 0;
}

int run_solutions(const std::string& model, const std::string& outdir, const std::string& target,
                  const std::string& command) {
  ModelHandle m;
  load_model(model, m);
  double q[24], g[24];
  require_ok(hs_enumerate_solutions(m.m, target == "excited" ? 1 : 0, q, g), kExitModel);
  static const char* pat[8] = {"+++", "-++", "+-+", "++-", "-+-", "+--", "--+", "---"};
  std::string csv = "pattern,q_alpha_deg,q_beta_deg,q_gamma_deg,g1_mhz_per_T,g2_mhz_per_T,g3_mhz_per_T\n";
  for (int i = 0; i < 8; ++i) {
    csv += pat[i];
    for (int j = 0; j < 3; ++j) csv += "," + fmt(q[3 * i + j]);
    for (int j = 0; j < 3; ++j) csv += "," + fmt(g[3 * i + j]);
    csv += "\n";
  }
  write_file(outdir + "/solutions.csv", csv);
  write_metadata(outdir, command, 0);
  std::printf("wrote %s/solutions.csv\n", outdir.c_str());
  return 0;
}

int run_branching(const std::string& model, const std::string& outdir,
                  const std::string& command) {
  ModelHandle m;
  load_model(model, m);
  double t[9], ag[3], ae[3];
  require_ok(hs_branching_table(m.m, t), kExitModel);
  require_ok(hs_quenching(m.m, 0, ag), kExitModel);
  require_ok(hs_quenching(m.m, 1, ae), kExitModel);
  std::string csv = "ground_label,to_excited_1_2,to_excited_3_2,to_excited_5_2\n";
  static const char* lbl[3] = {"1/2", "3/2", "5/2"};
  for (int k = 0; k < 3; ++k) {
    csv += lbl[k];
    for (int l = 0; l < 3; ++l) csv += "," + fmt(t[3 * k + l]);
    csv += "\n";
  }
  csv += "\nstate,alpha1,alpha2,alpha3\n";
  csv += "ground," + fmt(ag[0]) + "," + fmt(ag[1]) + "," + fmt(ag[2]) + "\n";
  csv += "excited," + fmt(ae[0]) + "," + fmt(ae[1]) + "," + fmt(ae[2]) + "\n";
  write_file(outdir + "/branching.csv", csv);
  write_metadata(outdir, command, 0);
  std::printf("wrote %s/branching.csv\n", outdir.c_str());
  return 0;
}

int run_map(const std::string& model, const std::string& outdir, const ScanSpec& scan,
            const std::string& transition, bool crystal, double /*width*/,
            const std::string& command) {
  ModelHandle m;
  load_model(model, m);
  const auto [k, l] = parse_transition(transition.empty() ? "0,0" : transition);
  const std::vector<double> xyz = scan_points(scan, m, crystal);
  std::string csv = "scan_n,Bx_mT,By_mT,Bz_mT,f_khz,weight\n";
  std::vector<double> f(64), w(64);
  for (int i = 0; i < scan.n; ++i) {
    size_t count = 0;
    require_ok(hs_site_lines(m.m, &xyz[3 * i], k, l, f.data(), w.data(), f.size(), &count),
               kExitModel);
    for (size_t j = 0; j < count && j < f.size(); ++j) {
      csv += std::to_string(i) + "," + fmt(xyz[3 * i]) + "," + fmt(xyz[3 * i + 1]) + "," +
             fmt(xyz[3 * i + 2]) + "," + fmt(f[j]) + "," + fmt(w[j]) + "\n";
    }
  }
  write_file(outdir + "/map.csv", csv);
  write_metadata(outdir, command, 0);
  std::printf("wrote %s/map.csv (%d points, transition %d,%d)\n", outdir.c_str(), scan.n, k, l);
  return 0;
}

int run_ellipsoid(const std::string& model, const std::string& outdir, const std::string& target,
                  const std::string& command) {
  ModelHandle m;
  load_model(model, m);
  double c[9];
  require_ok(hs_response_coefficients(m.m, target == "excited" ? 1 : 0, c), kExitModel);
  std::string csv = "doublet,c1_mhz_per_T,c2_mhz_per_T,c3_mhz_per_T\n";
  static const char* lbl[3] = {"1/2", "3/2", "5/2"};
  for (int k = 0; k < 3; ++k)
    csv += std::string(lbl[k]) + "," + fmt(c[3 * k]) + "," + fmt(c[3 * k + 1]) + "," +
           fmt(c[3 * k + 2]) + "\n";
  write_file(outdir + "/ellipsoid.csv", csv);
  write_metadata(outdir, command, 0);
  std::printf("wrote %s/ellipsoid.csv\n", outdir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperspin: hyperfine spectra and tensor fitting for I = 5/2 ions"};
  app.require_subcommand(1);

  std::string model, outdir = ".", obs_path, target = "ground", frame = "lab";
  std::string scan_str = "10,10,5,200", transition;
  std::vector<std::string> transitions;
  double noise = 1.0, width = 25.0, stop_rms = 0.0, escalate_rms = 0.0;
  uint64_t seed = 1;
  int chains = 0;

  app.add_option("--model", model, "site model JSON file");
  app.add_option("--out", outdir, "output directory (default .)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--scan", scan_str, "field scan Bx,By,Bz,N (mT, points)");
  app.add_option("--width-khz", width, "line width for profiles");
  app.add_option("--frame", frame, "scan vector frame: lab|crystal")
      ->check(CLI::IsMember({"lab", "crystal"}));

  auto* synth = app.add_subcommand("synth", "synthesize noisy observations over a field scan");
  synth->add_option("--noise-khz", noise, "Gaussian position noise (default 1)");
  synth->add_option("--transition", transitions, "pumped transition k,l (repeatable)");

  auto* fit = app.add_subcommand("fit", "bootstrap fit of one state's tensors");
  fit->add_option("--obs", obs_path, "observations CSV")->required();
  fit->add_option("--target", target, "ground|excited")
      ->check(CLI::IsMember({"ground", "excited"}));
  fit->add_option("--chains", chains, "annealing chains");
  fit->add_option("--stop-rms-khz", stop_rms, "early-stop rms");
  fit->add_option("--escalate-rms-khz", escalate_rms, "escalation threshold");

  auto* sol = app.add_subcommand("solutions", "enumerate the sign-family solutions");
  sol->add_option("--target", target, "ground|excited")
      ->check(CLI::IsMember({"ground", "excited"}));

  app.add_subcommand("branching", "subsite-averaged branching table and quenching");

  auto* map = app.add_subcommand("map", "line positions of one transition over a scan");
  map->add_option("--transition", transition, "pumped transition k,l");

  auto* ell = app.add_subcommand("ellipsoid", "splitting-ellipsoid response coefficients");
  ell->add_option("--target", target, "ground|excited")
      ->check(CLI::IsMember({"ground", "excited"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  std::string command;
  for (int i = 0; i < argc; ++i) command += std::string(i ? " " : "") + argv[i];

  try {
    const bool crystal = frame == "crystal";
    if (synth->parsed())
      return run_synth(model, outdir, parse_scan(scan_str), transitions, noise, seed, crystal,
                       command);
    if (fit->parsed())
      return run_fit(model, outdir, obs_path, target, seed, chains, stop_rms, escalate_rms,
                     command);
    if (sol->parsed()) return run_solutions(model, outdir, target, command);
    if (app.get_subcommand("branching")->parsed())
      return run_branching(model, outdir, command);
    if (map->parsed())
      return run_map(model, outdir, parse_scan(scan_str), transition, crystal, width, command);
    if (ell->parsed()) return run_ellipsoid(model, outdir, target, command);
    std::fprintf(stderr, "no subcommand\n");
    return kExitConfig;
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.msg.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

#include "core/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "core/spinops.hpp"

namespace hs::spectra {

std::vector<Vec3> spiral_scan(double bx_mt, double by_mt, double bz_mt, int n) {
  if (n < 2) throw Error(Err::BadArgument, "spiral scan needs at least 2 points");
  std::vector<Vec3> out(n);
  for (int i = 1; i <= n; ++i) {
    const double t = -1.0 + 2.0 * (i - 1) / (n - 1);
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    out[i - 1] = {bx_mt * s * std::cos(6 * kPi * t), -by_mt * t, bz_mt * s * std::sin(6 * kPi * t)};
  }
  return out;
}

std::vector<Line> hole_pattern(double dg_khz, double de_khz, double merge_khz) {
  const double dg = dg_khz, de = de_khz;
  std::vector<Line> raw = {{0, 4},           {-de, 1},          {de, 1},
                           {-dg, -2},        {dg, -2},          {-(dg - de), -1},
                           {dg - de, -1},    {-(dg + de), -1},  {dg + de, -1}};
  std::sort(raw.begin(), raw.end(), [](const Line& a, const Line& b) { return a.f_khz < b.f_khz; });
  std::vector<Line> out;
  for (const Line& ln : raw) {
    if (!out.empty() && ln.f_khz - out.back().f_khz < merge_khz) {
      Line& m = out.back();
      const double n = m.f_khz * std::abs(m.w) + ln.f_khz * std::abs(ln.w);
      const double wa = std::abs(m.w) + std::abs(ln.w);
      m.f_khz = wa > 0 ? n / wa : 0.5 * (m.f_khz + ln.f_khz);
      m.w += ln.w;
    } else {
      out.push_back(ln);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Line& l) { return std::abs(l.w) < 1e-12; }),
            out.end());
  return out;
}

SiteSplittings site_splittings(const model::SiteModel& m, const Vec3& b_mt) {
  SiteSplittings s;
  const auto polg = spinops::pair_of_label(m.ground.Q());
  const auto pole = spinops::pair_of_label(m.excited.Q());
  const Mat3 c2 = m.c2();
  for (int sub = 0; sub < 2; ++sub) {
    // the partner subsite at B equals the base subsite at C2 B
    const Vec3 b = sub == 0 ? b_mt : Vec3(c2 * b_mt);
    s.dg_khz[sub] = spinops::exact_split_khz(m.ground.Q(), m.ground.M(), b, polg);
    s.de_khz[sub] = spinops::exact_split_khz(m.excited.Q(), m.excited.M(), b, pole);
  }
  return s;
}

std::vector<Line> site_lines(const model::SiteModel& m, const Vec3& b_mt, int k, int l) {
  if (k < 0 || k > 2 || l < 0 || l > 2) throw Error(Err::BadArgument, "labels must be 0..2");
  const SiteSplittings s = site_splittings(m, b_mt);
  std::vector<Line> out;
  for (int sub = 0; sub < 2; ++sub) {
    const auto part = hole_pattern(s.dg_khz[sub][k], s.de_khz[sub][l]);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<double> profile(const std::vector<Line>& lines, const std::vector<double>& grid_khz,
                            double width_khz, bool gaussian) {
  if (width_khz <= 0) throw Error(Err::BadArgument, "line width must be positive");
  std::vector<double> out(grid_khz.size(), 0.0);
  const double hw = 0.5 * width_khz;
  const double gs = width_khz / (2.0 * std::sqrt(2.0 * std::log(2.0)));  // FWHM -> sigma
  for (size_t i = 0; i < grid_khz.size(); ++i) {
    double v = 0;
    for (const Line& ln : lines) {
      const double x = grid_khz[i] - ln.f_khz;
      if (gaussian)
        v += ln.w * std::exp(-0.5 * x * x / (gs * gs));
      else
        v += ln.w * hw * hw / (x * x + hw * hw);
    }
    out[i] = v;
  }
  return out;
}

namespace {

void fft_inplace(std::vector<Cplx>& a) {  // radix-2 Cooley-Tukey, size must be 2^k
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / double(len);
    const Cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Cplx w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const Cplx u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

size_t samples_per_period(double rate_khz, double df_khz) {
  if (rate_khz <= 0 || df_khz <= 0) throw Error(Err::BadArgument, "rate and df must be positive");
  const double kf = rate_khz / df_khz;
  const double kr = std::round(kf);
  if (std::abs(kf - kr) > 1e-6 || kr < 4)
    throw Error(Err::BadArgument, "rate must be an integer multiple (>= 4) of df");
  return size_t(kr);
}

}  // namespace

std::vector<double> fid_trace(const std::vector<Line>& lines, const FidParams& fp, double df_khz) {
  const size_t k = samples_per_period(fp.rate_khz, df_khz);
  double fmax = 0;
  for (const Line& ln : lines) fmax = std::max(fmax, std::abs(fp.lo_khz + ln.f_khz));
  if (2.0 * fmax >= fp.rate_khz)
    throw Error(Err::NyquistViolation, "sampling rate below twice the highest line frequency");
  std::vector<double> s(k, 0.0);
  const double dt = 1.0 / fp.rate_khz;  // ms
  for (size_t m = 0; m < k; ++m) {
    const double t = fp.tau_ms + m * dt;
    double v = 0;
    for (const Line& ln : lines)
      v += ln.w * std::cos(2.0 * kPi * (fp.lo_khz + ln.f_khz) * t + fp.phi0_rad);
    s[m] = v;
  }
  return s;
}

std::vector<Line> recover_spectrum(const std::vector<double>& trace, const FidParams& fp,
                                   double df_khz) {
  const size_t k = samples_per_period(fp.rate_khz, df_khz);
  if (trace.size() != k)
    throw Error(Err::BadArgument, "trace length must be one full period (rate/df samples)");
  std::vector<Cplx> a(trace.begin(), trace.end());
  const bool pow2 = (k & (k - 1)) == 0;
  if (pow2) {
    fft_inplace(a);
  } else {
    std::vector<Cplx> out(k, Cplx(0, 0));
    for (size_t b = 0; b < k; ++b) {
      Cplx acc(0, 0);
      for (size_t m = 0; m < k; ++m) {
        const double ang = -2.0 * kPi * double(b) * double(m) / double(k);
        acc += trace[m] * Cplx(std::cos(ang), std::sin(ang));
      }
      out[b] = acc;
    }
    a = std::move(out);
  }
  std::vector<Line> lines;
  lines.reserve(k / 2);
  for (size_t b = 1; b < k / 2; ++b) {
    const double nu = b * df_khz;
    const double ph = 2.0 * kPi * nu * fp.tau_ms + fp.phi0_rad;
    const Cplx amp = (2.0 / double(k)) * a[b] * Cplx(std::cos(ph), -std::sin(ph));
    lines.push_back({nu - fp.lo_khz, amp.real()});
  }
  return lines;
}

}  // namespace hs::spectra

#pragma once

#include <array>
#include <vector>

#include "core/common.hpp"
#include "core/model.hpp"

namespace hs::spectra {

// ellipsoidal spiral over the sphere: point n of N (1-based) at
// t = -1 + 2(n-1)/(N-1), B = (Bx sqrt(1-t^2) cos 6 pi t, -By t, Bz sqrt(1-t^2) sin 6 pi t)
std::vector<Vec3> spiral_scan(double bx_mt, double by_mt, double bz_mt, int n);

struct Line {
  double f_khz;  // offset from the pumped transition
  double w;      // signed weight: holes positive, antiholes negative
};

// class-cleaned SHB pattern around a pumped transition whose ground doublet
// splits by dg and excited by de: holes at 0 (w 4) and +-de (w 1); antiholes
// at +-dg (w -2), +-(dg-de) (w -1), +-(dg+de) (w -1); coincident lines merge
std::vector<Line> hole_pattern(double dg_khz, double de_khz, double merge_khz = 0.1);

// doublet splittings for both subsites of both states at one field
struct SiteSplittings {
  std::array<std::array<double, 3>, 2> dg_khz;  // [subsite][label]
  std::array<std::array<double, 3>, 2> de_khz;
};
SiteSplittings site_splittings(const model::SiteModel& m, const Vec3& b_mt);

// both subsites' SHB lines of one pumped transition (k = ground label,
// l = excited label), concatenated subsite 0 then 1
std::vector<Line> site_lines(const model::SiteModel& m, const Vec3& b_mt, int k, int l);

// transmission-change profile sampled on a frequency grid (Lorentzian or
// Gaussian line shape, FWHM width_khz)
std::vector<double> profile(const std::vector<Line>& lines, const std::vector<double>& grid_khz,
                            double width_khz, bool gaussian);

// heterodyne FID on a commensurate grid: every line at absolute frequency
// lo_khz + f occupies an exact DFT bin when rate/df is an integer and the
// line frequencies are multiples of df
struct FidParams {
  double rate_khz = 0;  // sampling rate
  double lo_khz = 0;    // local-oscillator offset
  double tau_ms = 0;    // dead time before acquisition
  double phi0_rad = 0;  // readout phase
};

// one full period (rate/df samples) of sum_j w_j cos(2 pi (lo+f_j)(tau+t) + phi0)
std::vector<double> fid_trace(const std::vector<Line>& lines, const FidParams& fp, double df_khz);

// phase-corrected DFT back to the offset domain; returns all bins below the
// Nyquist frequency as lines at f = b df - lo
std::vector<Line> recover_spectrum(const std::vector<double>& trace, const FidParams& fp,
                                   double df_khz);

}  // namespace hs::spectra

/* hyperspin: effective nuclear-spin Hamiltonians of non-Kramers rare-earth
 * ions (I = 5/2) under weak magnetic fields — level structure, spectral-hole
 * patterns, FID signals, and tensor fitting.
 *
 * All functions return HS_OK (0) or an HS_ERR_* code; hs_last_error() gives
 * a thread-local message for the most recent failure on this thread.
 * Angles are degrees, fields mT, energies MHz, offsets kHz, Zeeman values
 * MHz/T.  target: 0 = ground state, 1 = excited state.  subsite: 0 or 1.
 * Doublet labels: 0, 1, 2 for the |±1/2>-, |±3/2>-, |±5/2>-like pairs. */
#ifndef HYPERSPIN_H
#define HYPERSPIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  HS_OK = 0,
  HS_ERR_BAD_ARGUMENT = 1,
  HS_ERR_DEGENERACY_AMBIGUOUS = 2,
  HS_ERR_ILL_CONDITIONED = 3,
  HS_ERR_INSUFFICIENT_COINCIDENCES = 4,
  HS_ERR_SINGULAR_NORMAL_MATRIX = 5,
  HS_ERR_NYQUIST_VIOLATION = 6,
  HS_ERR_PARSE = 7,
  HS_ERR_IO = 8,
  HS_ERR_FIT_FAILED = 9,
  HS_ERR_UNKNOWN = 127
};

const char* hs_last_error(void);
const char* hs_version(void);

/* ---- site model (ground + excited tensors + crystal frame) ---- */
typedef struct hs_model hs_model;

int hs_model_load(const char* path, hs_model** out);
int hs_model_from_json(const char* text, hs_model** out);
/* writes the JSON text (NUL-terminated) into buf; *need gets the required
 * size including the terminator; HS_ERR_BAD_ARGUMENT if cap is too small */
int hs_model_to_json(const hs_model* m, char* buf, size_t cap, size_t* need);
int hs_model_save(const hs_model* m, const char* path);
void hs_model_free(hs_model* m);
/* map a vector between the lab and crystal frames (to_crystal nonzero:
 * lab -> crystal, else crystal -> lab) */
int hs_frame_vector(const hs_model* m, const double in[3], double out[3], int to_crystal);

/* ---- level structure ---- */
/* zero-field inter-doublet gaps, ascending-energy order */
int hs_zero_field_gaps(const hs_model* m, int target, double gaps_mhz[2]);
/* six energies (MHz, ascending) at a field */
int hs_energies(const hs_model* m, int target, int subsite, const double b_mt[3],
                double out_mhz[6]);
/* doublet splittings (kHz) by label at a field, exact diagonalization */
int hs_splittings(const hs_model* m, int target, int subsite, const double b_mt[3],
                  double out_khz[3]);
/* first-order (perturbative) splittings by label */
int hs_splittings_pt(const hs_model* m, int target, int subsite, const double b_mt[3],
                     double out_khz[3]);
/* direction response coefficients (MHz/T) of each doublet's splitting
 * ellipsoid, row-major [label][axis] */
int hs_response_coefficients(const hs_model* m, int target, double out[9]);

/* ---- spectra ---- */
/* Eq.-3-style ellipsoidal spiral; out_xyz holds 3n values (mT) */
int hs_spiral_scan(double bx_mt, double by_mt, double bz_mt, int n, double* out_xyz);
/* both subsites' spectral-hole pattern for pumped transition (k,l); writes
 * up to cap lines; *count gets the total available */
int hs_site_lines(const hs_model* m, const double b_mt[3], int k, int l, double* f_khz,
                  double* weight, size_t cap, size_t* count);

/* ---- branching ---- */
/* subsite-averaged relative oscillator strengths, row-major [ground][excited] */
int hs_branching_table(const hs_model* m, double out[9]);
/* quenching parameters alpha = 1 - g/gN (gN = 10.56 MHz/T) */
int hs_quenching(const hs_model* m, int target, double out[3]);
/* the eight sign-family solutions of one state: row i holds the quadrupole
 * orientation angles (deg) and signed g values of enumeration member i */
int hs_enumerate_solutions(const hs_model* m, int target, double out_q_abg[24],
                           double out_g[24]);
/* rank all (or excited-restricted) sign pairings against a measured table
 * (row-major); outputs per rank: ground index, excited index, max deviation,
 * in-band flag.  n_out gets the number of pairings written (<= cap). */
int hs_select_solution(const hs_model* m, const double measured[9], double band,
                       int restrict_excited, int* ig, int* ie, double* max_dev, int* in_band,
                       size_t cap, size_t* n_out);

/* ---- observations ---- */
typedef struct hs_observations hs_observations;

/* exact-model offsets with Gaussian position noise over a field scan;
 * kl_pairs holds n_trans (k,l) label pairs */
int hs_observations_synth(const hs_model* m, const double* b_xyz_mt, size_t n_points,
                          const int* kl_pairs, size_t n_trans, double noise_khz, uint64_t seed,
                          hs_observations** out);
int hs_observations_from_csv(const char* text, hs_observations** out);
int hs_observations_to_csv(const hs_observations* o, char* buf, size_t cap, size_t* need);
size_t hs_observations_count(const hs_observations* o);
void hs_observations_free(hs_observations* o);

/* ---- fitting ---- */
typedef struct hs_fit_result hs_fit_result;

typedef struct {
  int target;               /* fitted state: 0 ground, 1 excited */
  int assignment;           /* 0 paired (order statistics), 1 nearest+gate */
  int chains;               /* annealing chains */
  double stop_rms_khz;      /* early stop threshold, 0 = off */
  double escalate_rms_khz;  /* bootstrap escalation threshold */
  uint64_t seed;
} hs_fit_options;

int hs_fit_options_init(hs_fit_options* opt);
/* full pipeline: C2-axis estimate, ellipsoid orientation seed, anneal,
 * exact refine, escalation */
int hs_bootstrap_fit(const hs_model* m, const hs_observations* obs, const hs_fit_options* opt,
                     hs_fit_result** out);
/* fitted parameter vector: q angles (3), m angles (3), g (3), c2 alpha, beta */
int hs_fit_result_params(const hs_fit_result* r, double out[11]);
int hs_fit_result_stats(const hs_fit_result* r, double* rms_khz, double* chi2,
                        long* evaluations, int* escalated);
/* base model with the fitted state's parameters substituted */
int hs_fit_result_model(const hs_fit_result* r, hs_model** out);
void hs_fit_result_free(hs_fit_result* r);

#ifdef __cplusplus
}
#endif

#endif /* HYPERSPIN_H */

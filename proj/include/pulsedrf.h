/* C interface to the pulsed resonance-fluorescence simulator.
 *
 * Handles are opaque; every function that can fail returns a PRF_* status
 * code (or NULL for constructors) and leaves a message in prf_last_error(),
 * which is thread-local and survives until the next call on that thread.
 * Strings returned through char** are heap-allocated; release them with
 * prf_string_free. */
#ifndef PULSEDRF_H
#define PULSEDRF_H

#ifdef __cplusplus
extern "C" {
#endif

#define PRF_OK 0
#define PRF_ERR_VALIDATION 1 /* rejected configuration or arguments */
#define PRF_ERR_NUMERICAL 2  /* propagation or convergence failure */
#define PRF_ERR_IO 3         /* filesystem failure */
#define PRF_ERR_INTERNAL 4   /* anything else */

/* Library version ("1.0.0"); static storage. */
const char* prf_version(void);

/* Message explaining the most recent failure on this thread; cleared to ""
 * by the next successful call. */
const char* prf_last_error(void);

void prf_string_free(char* s);

/* A run description: preset or config file plus overrides. */
typedef struct prf_run prf_run;

/* name: fig1 | fig2 | fig3. NULL on error. */
prf_run* prf_run_from_preset(const char* name);

/* Load a flat key = value config document. NULL on error. */
prf_run* prf_run_from_file(const char* path);

/* Apply one "key = value" override line. */
int prf_run_set(prf_run* run, const char* line);

/* The run's configured output directory (allocated string). */
int prf_run_out_dir(prf_run* run, char** dir);

/* Number of simulation points this run expands to. sweep != 0 uses the sweep
 * lists; otherwise only the base point (plus a phonon off/on pair when
 * phonons = pair). */
int prf_run_point_count(prf_run* run, int sweep, int* count);

/* Label of one expanded point (allocated string). */
int prf_run_point_label(prf_run* run, int sweep, int index, char** label);

/* Execute every point into out_dir: per point <label>/spectrum.csv and
 * <label>/meta.json, plus aggregate.csv, manifest.json, resolved.cfg and
 * timing.txt at the root. Per-point failures are recorded in the manifest and
 * counted in *failed_points (may be NULL); the call itself fails only when
 * nothing could be written or the configuration is invalid. Returns
 * PRF_ERR_NUMERICAL if any point failed. threads < 1 uses the config's
 * threads value. */
int prf_run_execute(prf_run* run, const char* out_dir, int sweep, int threads,
                    int* failed_points);

void prf_run_free(prf_run* run);

/* One computed spectrum held in memory. */
typedef struct prf_spectrum prf_spectrum;

/* Compute point `index` of the run's expansion. NULL on error. */
prf_spectrum* prf_spectrum_compute(prf_run* run, int sweep, int index, int threads);

/* Number of detuning samples, or a negative PRF_* code. */
int prf_spectrum_size(const prf_spectrum* s);

/* Copy one column into out[0..cap): name is delta | s_total | s_coh | s_inc.
 * cap must be at least prf_spectrum_size. */
int prf_spectrum_column(const prf_spectrum* s, const char* name, double* out, int cap);

int prf_spectrum_coh_fraction(const prf_spectrum* s, double* out);

/* Peak table, sideband ratio, pulse diagnostics as a JSON document. */
int prf_spectrum_metrics_json(const prf_spectrum* s, char** json);

void prf_spectrum_free(prf_spectrum* s);

/* Analyze an emitted spectrum.csv: peak table, coherent fraction, and, when
 * omega_r > 0, the sideband weight ratio about +-omega_r. JSON document. */
int prf_analyze_file(const char* spectrum_csv, double omega_r, char** json);

/* Write <results_dir>/plot.py rendering that directory's manifest. The
 * emitted path is returned when path is non-NULL. */
int prf_emit_plot_script(const char* results_dir, char** path);

#ifdef __cplusplus
}
#endif

#endif /* PULSEDRF_H */

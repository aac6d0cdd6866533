/* C interface to the qgdecoh library.
 *
 * Every function returns a qgd_status; on failure a description is available
 * from qgd_last_error() (thread-local, valid until the next failing call on
 * the same thread). Objects are opaque handles released with their _free
 * function; strings returned through char** are released with
 * qgd_string_free. All physical values are SI.
 */
#ifndef QGDECOH_H
#define QGDECOH_H

#include <stddef.h>

#if defined(_WIN32)
#define QGD_API __declspec(dllexport)
#else
#define QGD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qgd_status {
  QGD_OK = 0,
  QGD_ERR_INPUT = 1,     /* invalid argument */
  QGD_ERR_CONFIG = 2,    /* config syntax or validation */
  QGD_ERR_DIMENSION = 3, /* unit mismatch */
  QGD_ERR_NUMERIC = 4,   /* quadrature, overflow, positivity */
  QGD_ERR_INTERNAL = 5
} qgd_status;

QGD_API const char* qgd_last_error(void);
QGD_API const char* qgd_status_name(qgd_status status);
QGD_API const char* qgd_version(void);
QGD_API void qgd_string_free(char* s);

/* ---- constants and rates ------------------------------------------------ */

typedef struct qgd_constants {
  double c;         /* m s^-1 */
  double hbar;      /* kg m^2 s^-1 */
  double m_planck;  /* kg */
  double m_nucleon; /* kg */
  double amu;       /* kg */
} qgd_constants;

QGD_API void qgd_constants_default(qgd_constants* out);

/* density_fraction (c m0)^4 m^2 / (hbar m_Pl)^3 in m^-2 s^-1. NULL
 * constants selects the defaults. */
QGD_API qgd_status qgd_gamma_qg(const qgd_constants* constants, double mass_kg,
                                double density_fraction, double* gamma_out);
/* c m0^2 / (hbar m_Pl) in m^-1. */
QGD_API qgd_status qgd_wormhole_sigma(const qgd_constants* constants, double* sigma_out);

/* ---- kernels ------------------------------------------------------------ */

typedef struct qgd_kernel qgd_kernel;

/* prefactor must be 1 or 0.5. */
QGD_API qgd_status qgd_kernel_quadratic(double gamma, double prefactor, qgd_kernel** out);
QGD_API qgd_status qgd_kernel_scattering(double event_rate, double sigma, qgd_kernel** out);
QGD_API void qgd_kernel_free(qgd_kernel* k);
QGD_API qgd_status qgd_kernel_rate(const qgd_kernel* k, double separation_m, double* rate_out);
/* Small-separation coefficient of a scattering kernel; QGD_ERR_INPUT for a
 * quadratic kernel. */
QGD_API qgd_status qgd_kernel_quadratic_limit(const qgd_kernel* k, double* gamma_out);

/* ---- trajectories ------------------------------------------------------- */

typedef struct qgd_trajectory qgd_trajectory;

QGD_API qgd_status qgd_trajectory_paper(double d_max_m, double half_time_s, qgd_trajectory** out);
QGD_API qgd_status qgd_trajectory_triangular(double d_max_m, double half_time_s,
                                             qgd_trajectory** out);
QGD_API qgd_status qgd_trajectory_constant(double separation_m, double duration_s,
                                           qgd_trajectory** out);
QGD_API qgd_status qgd_trajectory_sampled(const double* times_s, const double* separations_m,
                                          size_t count, qgd_trajectory** out);
QGD_API void qgd_trajectory_free(qgd_trajectory* t);
QGD_API qgd_status qgd_trajectory_separation_at(const qgd_trajectory* t, double time_s,
                                                double* separation_out);
QGD_API qgd_status qgd_trajectory_duration(const qgd_trajectory* t, double* duration_out);
/* kappa = integral d^2 dt / (d_max^2 T), T = half the total duration. */
QGD_API qgd_status qgd_trajectory_geometric_factor(const qgd_trajectory* t, double* kappa_out);
/* product = max d(t) * sigma; in_regime = product < 0.01. */
QGD_API qgd_status qgd_trajectory_validity(const qgd_trajectory* t, double sigma,
                                           double* product_out, int* in_regime_out);

/* n hbar k T / m. NULL constants selects the defaults. */
QGD_API qgd_status qgd_max_separation_from_recoils(const qgd_constants* constants, int n_recoils,
                                                   double wavenumber, double atom_mass_kg,
                                                   double drift_time_s, double* d_max_out);

/* ---- evolution ---------------------------------------------------------- */

typedef struct qgd_coherence {
  double initial_coherence;
  double exponent;
  double final_coherence;
  double contrast;
} qgd_coherence;

QGD_API qgd_status qgd_coherence_decay(const qgd_kernel* k, const qgd_trajectory* t,
                                       double initial_coherence, qgd_coherence* out);
QGD_API qgd_status qgd_moving_branch_evolve(const qgd_kernel* k, const qgd_trajectory* t,
                                            int time_steps, double initial_coherence,
                                            qgd_coherence* out);

typedef struct qgd_grid qgd_grid;

/* rho_re / rho_im are row-major n x n. */
QGD_API qgd_status qgd_grid_create(const double* positions_m, size_t n, const double* rho_re,
                                   const double* rho_im, qgd_grid** out);
QGD_API void qgd_grid_free(qgd_grid* g);
/* Evolves in place. h_re/h_im (row-major, angular frequency s^-1) may both
 * be NULL for no Hamiltonian. On error the grid is left unchanged. */
QGD_API qgd_status qgd_grid_evolve(qgd_grid* g, const qgd_kernel* k, const double* h_re,
                                   const double* h_im, double dt_s, int steps);
QGD_API size_t qgd_grid_size(const qgd_grid* g);
QGD_API double qgd_grid_time(const qgd_grid* g);
/* Copies rho into caller buffers of n*n doubles; either may be NULL. */
QGD_API qgd_status qgd_grid_rho(const qgd_grid* g, double* rho_re, double* rho_im);

/* ---- bounds ------------------------------------------------------------- */

typedef struct qgd_measurement {
  double contrast;
  double initial_coherence;    /* default 0.5 */
  double attribution_fraction; /* default 1 */
} qgd_measurement;

typedef enum qgd_exclusion_status {
  QGD_EXCLUSION_PENDING = 0,
  QGD_EXCLUSION_FINITE = 1,
  QGD_EXCLUSION_NO_OBSERVED_LOSS = 2 /* exclusion_ratio is +inf */
} qgd_exclusion_status;

typedef struct qgd_bound {
  double gamma_max;
  double exponent_observed;
  double exclusion_ratio;
  double density_fraction_max;
  double event_rate_max; /* scattering inversion only, else 0 */
  qgd_exclusion_status status;
} qgd_bound;

/* Closed-form inversion for a quadratic kernel with the given prefactor. */
QGD_API qgd_status qgd_invert_bound(const qgd_measurement* m, const qgd_trajectory* t,
                                    double prefactor, qgd_bound* out);
/* Inversion through the kernel's shape (bisection on event_rate for
 * scattering kernels); only the kernel's form is used, not its strength. */
QGD_API qgd_status qgd_invert_bound_kernel(const qgd_measurement* m, const qgd_trajectory* t,
                                           const qgd_kernel* shape, qgd_bound* out);
/* Completes exclusion_ratio, density_fraction_max and status. */
QGD_API qgd_status qgd_exclusion_ratio(qgd_bound* bound, const qgd_constants* constants,
                                       double model_mass_kg);
QGD_API qgd_status qgd_predict_species(const qgd_constants* constants, double density_fraction,
                                       const qgd_trajectory* t, double species_mass_kg,
                                       double initial_coherence, double prefactor,
                                       qgd_coherence* out);

/* ---- experiment configs and reports ------------------------------------- */

typedef struct qgd_config qgd_config;

/* base_dir (may be NULL) anchors relative samples_csv paths. */
QGD_API qgd_status qgd_config_parse(const char* text, const char* base_dir, qgd_config** out);
QGD_API qgd_status qgd_config_preset(const char* name, qgd_config** out);
QGD_API void qgd_config_free(qgd_config* c);
/* Replaces one key ("" section for top-level) and re-validates. */
QGD_API qgd_status qgd_config_set(qgd_config* c, const char* section, const char* key,
                                  const char* value);
/* Configured [output] precision and csv path (NULL when unset). */
QGD_API int qgd_config_precision(const qgd_config* c);
QGD_API const char* qgd_config_csv_path(const qgd_config* c);

/* Report generators; precision <= 0 uses the config's. Output strings are
 * heap-allocated, release with qgd_string_free. */
QGD_API qgd_status qgd_report_gamma(const qgd_config* c, int precision, char** out);
QGD_API qgd_status qgd_report_trajectory(const qgd_config* c, int points, int precision,
                                         char** out);
QGD_API qgd_status qgd_report_contrast(const qgd_config* c, int precision, char** out);
QGD_API qgd_status qgd_report_evolve(const qgd_config* c, int points, int precision, char** out);
/* max_separation_m <= 0 uses the trajectory's peak separation. */
QGD_API qgd_status qgd_report_kernel(const qgd_config* c, double max_separation_m, int points,
                                     int precision, char** out);
/* table_out and csv_out may each be NULL. */
QGD_API qgd_status qgd_report_bound(const qgd_config* c, int precision, char** table_out,
                                    char** csv_out, qgd_bound* result_out);
QGD_API qgd_status qgd_report_scan(const qgd_config* c, const char* axis, const double* values,
                                   size_t count, int precision, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QGDECOH_H */

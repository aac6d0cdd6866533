#include "qgdecoh/qgdecoh.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "qgdecoh/bounds.hpp"
#include "qgdecoh/errors.hpp"
#include "qgdecoh/experiment.hpp"
#include "qgdecoh/report.hpp"

using namespace qgdecoh;

struct qgd_kernel {
  LocalizationKernel kernel;
};
struct qgd_trajectory {
  Trajectory traj;
};
struct qgd_grid {
  DensityMatrixGrid grid;
};
struct qgd_config {
  ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

qgd_status fail(qgd_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
qgd_status guarded(F&& f) noexcept {
  try {
    f();
    return QGD_OK;
  } catch (const ConfigError& e) {
    return fail(QGD_ERR_CONFIG, e.what());
  } catch (const DimensionError& e) {
    return fail(QGD_ERR_DIMENSION, e.what());
  } catch (const InputError& e) {
    return fail(QGD_ERR_INPUT, e.what());
  } catch (const NumericError& e) {
    return fail(QGD_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QGD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QGD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QGD_ERR_INTERNAL, "unknown exception");
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (!p) throw InputError(std::string(what) + " must not be NULL");
}

PhysicalConstants to_cpp(const qgd_constants* c) {
  PhysicalConstants k;
  if (c) {
    k.c = Quantity(c->c, dim::velocity);
    k.hbar = Quantity(c->hbar, dim::action);
    k.m_planck = kilograms(c->m_planck);
    k.m_nucleon = kilograms(c->m_nucleon);
    k.amu = kilograms(c->amu);
  }
  k.validate();
  return k;
}

qgd_coherence to_c(const CoherenceResult& r) {
  return {r.initial_coherence, r.exponent, r.final_coherence, r.contrast};
}

qgd_bound to_c(const BoundResult& r) {
  qgd_bound b{};
  b.gamma_max = r.gamma_max.value();
  b.exponent_observed = r.exponent_observed;
  b.exclusion_ratio = r.exclusion_ratio;
  b.density_fraction_max = r.density_fraction_max;
  b.event_rate_max = r.event_rate_max ? r.event_rate_max->value() : 0.0;
  b.status = r.status == ExclusionStatus::Finite           ? QGD_EXCLUSION_FINITE
             : r.status == ExclusionStatus::NoObservedLoss ? QGD_EXCLUSION_NO_OBSERVED_LOSS
                                                           : QGD_EXCLUSION_PENDING;
  return b;
}

BoundResult to_cpp(const qgd_bound& b) {
  BoundResult r;
  r.gamma_max = localization_rate(b.gamma_max);
  r.exponent_observed = b.exponent_observed;
  if (b.event_rate_max > 0.0) r.event_rate_max = hertz(b.event_rate_max);
  return r;
}

MeasuredContrast to_cpp(const qgd_measurement* m) {
  require(m, "measurement");
  return {m->contrast, m->initial_coherence, m->attribution_fraction};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

NumberFormat format_for(const qgd_config* c, int precision) {
  return NumberFormat(precision > 0 ? precision : c->cfg.precision);
}

template <class T, class... Args>
void emplace_handle(T** out, Args&&... args) {
  require(out, "output handle");
  *out = new T{std::forward<Args>(args)...};
}

}  // namespace

extern "C" {

const char* qgd_last_error(void) { return g_last_error.c_str(); }

const char* qgd_status_name(qgd_status s) {
  switch (s) {
    case QGD_OK: return "ok";
    case QGD_ERR_INPUT: return "input error";
    case QGD_ERR_CONFIG: return "config error";
    case QGD_ERR_DIMENSION: return "dimension error";
    case QGD_ERR_NUMERIC: return "numeric error";
    case QGD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qgd_version(void) { return "1.0.0"; }

void qgd_string_free(char* s) { std::free(s); }

void qgd_constants_default(qgd_constants* out) {
  if (!out) return;
  const PhysicalConstants k;
  *out = {k.c.value(), k.hbar.value(), k.m_planck.value(), k.m_nucleon.value(), k.amu.value()};
}

qgd_status qgd_gamma_qg(const qgd_constants* c, double mass, double density, double* out) {
  return guarded([&] {
    require(out, "gamma_out");
    *out = gamma_qg(EllisParameters(kilograms(mass), density, to_cpp(c))).value();
  });
}

qgd_status qgd_wormhole_sigma(const qgd_constants* c, double* out) {
  return guarded([&] {
    require(out, "sigma_out");
    *out = wormhole_sigma(to_cpp(c)).value();
  });
}

qgd_status qgd_kernel_quadratic(double gamma, double prefactor, qgd_kernel** out) {
  return guarded([&] {
    emplace_handle(out, LocalizationKernel::quadratic(localization_rate(gamma), prefactor));
  });
}

qgd_status qgd_kernel_scattering(double rate, double sigma, qgd_kernel** out) {
  return guarded([&] {
    emplace_handle(out, LocalizationKernel::scattering(hertz(rate), per_metre(sigma)));
  });
}

void qgd_kernel_free(qgd_kernel* k) { delete k; }

qgd_status qgd_kernel_rate(const qgd_kernel* k, double dx, double* out) {
  return guarded([&] {
    require(k, "kernel");
    require(out, "rate_out");
    *out = kernel_rate(k->kernel, metres(dx)).value();
  });
}

qgd_status qgd_kernel_quadratic_limit(const qgd_kernel* k, double* out) {
  return guarded([&] {
    require(k, "kernel");
    require(out, "gamma_out");
    const auto* s = k->kernel.as_scattering();
    if (!s) throw InputError("quadratic limit is defined for scattering kernels only");
    *out = quadratic_limit_coefficient(*s).value();
  });
}

qgd_status qgd_trajectory_paper(double d, double T, qgd_trajectory** out) {
  return guarded([&] { emplace_handle(out, Trajectory::paper_smoothed(metres(d), seconds(T))); });
}

qgd_status qgd_trajectory_triangular(double d, double T, qgd_trajectory** out) {
  return guarded([&] { emplace_handle(out, Trajectory::triangular(metres(d), seconds(T))); });
}

qgd_status qgd_trajectory_constant(double d, double duration, qgd_trajectory** out) {
  return guarded(
      [&] { emplace_handle(out, Trajectory::constant(metres(d), seconds(duration))); });
}

qgd_status qgd_trajectory_sampled(const double* times, const double* seps, size_t n,
                                  qgd_trajectory** out) {
  return guarded([&] {
    require(times, "times");
    require(seps, "separations");
    emplace_handle(out, Trajectory::sampled_si(std::vector<double>(times, times + n),
                                               std::vector<double>(seps, seps + n)));
  });
}

void qgd_trajectory_free(qgd_trajectory* t) { delete t; }

qgd_status qgd_trajectory_separation_at(const qgd_trajectory* t, double time, double* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "separation_out");
    *out = separation_at(t->traj, seconds(time)).value();
  });
}

qgd_status qgd_trajectory_duration(const qgd_trajectory* t, double* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "duration_out");
    *out = t->traj.duration_s();
  });
}

qgd_status qgd_trajectory_geometric_factor(const qgd_trajectory* t, double* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "kappa_out");
    *out = geometric_factor(t->traj);
  });
}

qgd_status qgd_trajectory_validity(const qgd_trajectory* t, double sigma, double* product,
                                   int* in_regime) {
  return guarded([&] {
    require(t, "trajectory");
    const ValidityReport v = validity_check(t->traj, per_metre(sigma));
    if (product) *product = v.sigma_times_peak;
    if (in_regime) *in_regime = v.quadratic_regime ? 1 : 0;
  });
}

qgd_status qgd_max_separation_from_recoils(const qgd_constants* c, int n, double k,
                                           double mass, double T, double* out) {
  return guarded([&] {
    require(out, "d_max_out");
    const RecoilKinematics kin{n, per_metre(k), kilograms(mass), seconds(T)};
    *out = max_separation_from_recoils(kin, to_cpp(c)).value();
  });
}

qgd_status qgd_coherence_decay(const qgd_kernel* k, const qgd_trajectory* t, double c0,
                               qgd_coherence* out) {
  return guarded([&] {
    require(k, "kernel");
    require(t, "trajectory");
    require(out, "result");
    *out = to_c(coherence_decay(k->kernel, t->traj, c0));
  });
}

qgd_status qgd_moving_branch_evolve(const qgd_kernel* k, const qgd_trajectory* t, int steps,
                                    double c0, qgd_coherence* out) {
  return guarded([&] {
    require(k, "kernel");
    require(t, "trajectory");
    require(out, "result");
    *out = to_c(moving_branch_evolve(k->kernel, t->traj, steps, c0));
  });
}

qgd_status qgd_grid_create(const double* positions, size_t n, const double* re,
                           const double* im, qgd_grid** out) {
  return guarded([&] {
    require(positions, "positions");
    require(re, "rho_re");
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd rho(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i * N + j);
        rho(i, j) = {re[idx], im ? im[idx] : 0.0};
      }
    emplace_handle(out, DensityMatrixGrid(std::vector<double>(positions, positions + n), rho));
  });
}

void qgd_grid_free(qgd_grid* g) { delete g; }

qgd_status qgd_grid_evolve(qgd_grid* g, const qgd_kernel* k, const double* h_re,
                           const double* h_im, double dt, int steps) {
  return guarded([&] {
    require(g, "grid");
    require(k, "kernel");
    std::optional<Eigen::MatrixXcd> h;
    if (h_re || h_im) {
      const Eigen::Index N = g->grid.size();
      h.emplace(N, N);
      for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j) {
          const std::size_t idx = static_cast<std::size_t>(i * N + j);
          (*h)(i, j) = {h_re ? h_re[idx] : 0.0, h_im ? h_im[idx] : 0.0};
        }
    }
    g->grid = grid_evolve(g->grid, k->kernel, h, dt, steps);
  });
}

size_t qgd_grid_size(const qgd_grid* g) {
  return g ? static_cast<size_t>(g->grid.size()) : 0;
}

double qgd_grid_time(const qgd_grid* g) { return g ? g->grid.time_s() : 0.0; }

qgd_status qgd_grid_rho(const qgd_grid* g, double* re, double* im) {
  return guarded([&] {
    require(g, "grid");
    const auto& rho = g->grid.rho();
    const Eigen::Index N = rho.rows();
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i * N + j);
        if (re) re[idx] = rho(i, j).real();
        if (im) im[idx] = rho(i, j).imag();
      }
  });
}

qgd_status qgd_invert_bound(const qgd_measurement* m, const qgd_trajectory* t,
                            double prefactor, qgd_bound* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "bound_out");
    *out = to_c(invert_bound(to_cpp(m), t->traj, prefactor));
  });
}

qgd_status qgd_invert_bound_kernel(const qgd_measurement* m, const qgd_trajectory* t,
                                   const qgd_kernel* shape, qgd_bound* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(shape, "kernel");
    require(out, "bound_out");
    *out = to_c(invert_bound(to_cpp(m), t->traj, shape->kernel));
  });
}

qgd_status qgd_exclusion_ratio(qgd_bound* b, const qgd_constants* c, double mass) {
  return guarded([&] {
    require(b, "bound");
    *b = to_c(exclusion_ratio(to_cpp(*b), EllisParameters(kilograms(mass), 1.0, to_cpp(c))));
  });
}

qgd_status qgd_predict_species(const qgd_constants* c, double density, const qgd_trajectory* t,
                               double mass, double c0, double prefactor, qgd_coherence* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "result");
    const PhysicalConstants k = to_cpp(c);
    const EllisParameters model(kilograms(mass), density, k);
    *out = to_c(predict_species(model, t->traj, kilograms(mass), c0, prefactor));
  });
}

qgd_status qgd_config_parse(const char* text, const char* base_dir, qgd_config** out) {
  return guarded([&] {
    require(text, "text");
    emplace_handle(out, parse_config(text, base_dir ? base_dir : ""));
  });
}

qgd_status qgd_config_preset(const char* name, qgd_config** out) {
  return guarded([&] {
    require(name, "name");
    emplace_handle(out, ExperimentConfig::resolve(RawConfig{{"", {{"preset", name}}}}));
  });
}

void qgd_config_free(qgd_config* c) { delete c; }

qgd_status qgd_config_set(qgd_config* c, const char* section, const char* key,
                          const char* value) {
  return guarded([&] {
    require(c, "config");
    require(section, "section");
    require(key, "key");
    require(value, "value");
    c->cfg = c->cfg.with_override(section, key, value);
  });
}

int qgd_config_precision(const qgd_config* c) { return c ? c->cfg.precision : 17; }

const char* qgd_config_csv_path(const qgd_config* c) {
  return c && c->cfg.csv_path ? c->cfg.csv_path->c_str() : nullptr;
}

qgd_status qgd_report_gamma(const qgd_config* c, int precision, char** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = dup_string(gamma_report(c->cfg, format_for(c, precision)));
  });
}

qgd_status qgd_report_trajectory(const qgd_config* c, int points, int precision, char** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = dup_string(trajectory_csv(c->cfg, points, format_for(c, precision)));
  });
}

qgd_status qgd_report_contrast(const qgd_config* c, int precision, char** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = dup_string(contrast_report(c->cfg, format_for(c, precision)));
  });
}

qgd_status qgd_report_evolve(const qgd_config* c, int points, int precision, char** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = dup_string(evolve_csv(c->cfg, points, format_for(c, precision)));
  });
}

qgd_status qgd_report_kernel(const qgd_config* c, double max_sep, int points, int precision,
                             char** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    const double span = max_sep > 0.0 ? max_sep : c->cfg.trajectory().peak_separation_m();
    *out = dup_string(kernel_csv(c->cfg, span, points, format_for(c, precision)));
  });
}

qgd_status qgd_report_bound(const qgd_config* c, int precision, char** table, char** csv,
                            qgd_bound* result) {
  return guarded([&] {
    require(c, "config");
    const BoundReport rep = bound_report(c->cfg, format_for(c, precision));
    char* t = table ? dup_string(rep.table) : nullptr;
    try {
      if (csv) *csv = dup_string(rep.csv);
    } catch (...) {
      std::free(t);
      throw;
    }
    if (table) *table = t;
    if (result) *result = to_c(rep.result);
  });
}

qgd_status qgd_report_scan(const qgd_config* c, const char* axis, const double* values,
                           size_t count, int precision, char** out) {
  return guarded([&] {
    require(c, "config");
    require(axis, "axis");
    require(out, "out");
    if (count > 0) require(values, "values");
    *out = dup_string(scan_csv(c->cfg, axis, std::vector<double>(values, values + count),
                               format_for(c, precision)));
  });
}

}  // extern "C"

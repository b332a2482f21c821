#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slabeling {

struct InvalidDims : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InconsistentOverride : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Model constants shared across dimensions. Defaults are the published
/// desk-scale values; theory() fills the conservative theoretical choices.
struct ModelConstants {
  double kappa_max = 1.0;
  double a_min = 1.0;
  double a_max = 1.0;
  double nu_max = 16.0 * M_PI * M_PI * M_PI / 15.0;
  double alpha_min = 1.0;
  double gamma = 1.0;
  double upsilon = 1.0;
  double sigma = 3.0;
  std::vector<double> zeta;  // per dimension d = 1..d_max
  double q = 1.0;

  double zeta_at(int d) const;
  void validate() const;

  /// Desk-scale defaults: upsilon*gamma/a_min = 1, sigma*gamma = 3,
  /// zeta_d = 1, kappa_max = 1.
  static ModelConstants practical();

  /// Conservative theoretical constants for documentation: gamma from the
  /// concentration requirement, sigma = 4D, zeta_d = 1/(256 d^2 (1+1/(8d))^2).
  /// The remaining scale constant is existence-only and normalized to
  /// upsilon = nu_max.
  static ModelConstants theory(int ambient_dim, double q = 1.0, double alpha_min = 1.0);
};

/// Per-dimension algorithm parameters.
struct DimParams {
  double h_par = 0.0;
  double h_perp = 0.0;
  double r = 0.0;
  int n_min = 2;
  double delta = 0.0;
  double kappa = 1.0;
};

struct ParamSchedule {
  int d_max = 0;
  std::vector<DimParams> dims;  // dims[d-1] holds the step-d parameters
  ModelConstants constants;

  const DimParams& at(int d) const { return dims.at(static_cast<size_t>(d) - 1); }
  void validate() const;
};

/// Sparse per-dimension overrides applied on top of a computed schedule.
struct ScheduleOverrides {
  std::optional<int> d_max;
  std::map<int, double> h_par, h_perp, r, delta, kappa;
  std::map<int, int> n_min;
};

/// Schedule from the published parameter choice: h_d = (48 d / kappa_max)
/// (1 + 1/d) (upsilon gamma log n / (a_min n))^{1/d}, r_d = h_d,
/// kappa_d = kappa_max, n_d = ceil(sigma gamma log n) (at least 2),
/// delta_d = zeta_d kappa_max h_d^2. Natural logarithm throughout.
ParamSchedule default_schedule(long n, int ambient_dim, const ModelConstants& c, int d_max);

/// default_schedule with desk-scale constants, then overrides applied
/// verbatim. Overriding h_par recomputes the dependent h_perp, r and delta
/// entries unless those are themselves overridden.
ParamSchedule practical_schedule(long n, int ambient_dim,
                                 const ScheduleOverrides& overrides = {});

}  // namespace slabeling

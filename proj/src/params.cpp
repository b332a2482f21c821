#include "slabeling/params.hpp"

#include <cmath>
#include <stdexcept>

namespace slabeling {

double ModelConstants::zeta_at(int d) const {
  if (d < 1) throw std::invalid_argument("zeta_at: d must be >= 1");
  if (zeta.empty()) return 1.0;
  const auto i = static_cast<size_t>(d - 1);
  return i < zeta.size() ? zeta[i] : zeta.back();
}

void ModelConstants::validate() const {
  if (!(kappa_max > 0) || !(a_min > 0) || !(a_max > 0) || !(nu_max > 0) ||
      !(gamma > 0) || !(upsilon > 0) || !(sigma > 0) || !(q > 0))
    throw std::invalid_argument("ModelConstants: all constants must be positive");
  if (a_min > a_max) throw std::invalid_argument("ModelConstants: a_min > a_max");
  if (!(alpha_min > 0) || alpha_min > 1.0)
    throw std::invalid_argument("ModelConstants: alpha_min must lie in (0,1]");
  for (double z : zeta)
    if (!(z > 0)) throw std::invalid_argument("ModelConstants: zeta entries must be positive");
}

ModelConstants ModelConstants::practical() { return ModelConstants{}; }

ModelConstants ModelConstants::theory(int ambient_dim, double q, double alpha_min) {
  if (ambient_dim < 2) throw std::invalid_argument("theory: ambient_dim must be >= 2");
  ModelConstants c;
  c.alpha_min = alpha_min;
  c.q = q;
  const double d2logd = ambient_dim * ambient_dim * std::log(double(ambient_dim));
  c.gamma = std::max(800.0 * d2logd, 56.0 * q / 3.0) / alpha_min;
  c.sigma = 4.0 * ambient_dim;
  c.upsilon = c.nu_max;  // existence-only constant, normalized
  c.zeta.resize(static_cast<size_t>(ambient_dim) - 1);
  for (int d = 1; d <= ambient_dim - 1; ++d) {
    const double f = 1.0 + 1.0 / (8.0 * d);
    c.zeta[static_cast<size_t>(d) - 1] = 1.0 / (256.0 * d * d * f * f);
  }
  return c;
}

void ParamSchedule::validate() const {
  if (d_max < 1 || dims.size() != static_cast<size_t>(d_max))
    throw std::invalid_argument("ParamSchedule: d_max/dims mismatch");
  for (const DimParams& p : dims) {
    if (!(p.h_par > 0) || !(p.h_perp > 0) || !(p.r > 0) || !(p.delta > 0) || !(p.kappa > 0))
      throw std::invalid_argument("ParamSchedule: parameters must be positive");
    if (p.n_min < 2) throw std::invalid_argument("ParamSchedule: n_min must be >= 2");
  }
  constants.validate();
}

ParamSchedule default_schedule(long n, int ambient_dim, const ModelConstants& c, int d_max) {
  if (n < 3) throw std::invalid_argument("default_schedule: n must be >= 3");
  if (d_max < 1 || d_max > ambient_dim - 1)
    throw InvalidDims("default_schedule: d_max must lie in [1, D-1]");
  c.validate();

  const double logn = std::log(double(n));
  const double base = c.upsilon * c.gamma * logn / (c.a_min * double(n));
  const int n_min = std::max<long>(2, static_cast<long>(std::ceil(c.sigma * c.gamma * logn)));

  ParamSchedule sched;
  sched.d_max = d_max;
  sched.constants = c;
  sched.dims.resize(static_cast<size_t>(d_max));
  for (int d = 1; d <= d_max; ++d) {
    DimParams& p = sched.dims[static_cast<size_t>(d) - 1];
    p.h_par = (48.0 * d / c.kappa_max) * (1.0 + 1.0 / d) * std::pow(base, 1.0 / d);
    p.kappa = c.kappa_max;
    p.h_perp = p.kappa * p.h_par * p.h_par;
    p.r = p.h_par;
    p.n_min = n_min;
    p.delta = c.zeta_at(d) * c.kappa_max * p.h_par * p.h_par;
  }
  sched.validate();
  return sched;
}

ParamSchedule practical_schedule(long n, int ambient_dim, const ScheduleOverrides& ov) {
  const int d_max = ov.d_max.value_or(ambient_dim - 1);
  ParamSchedule sched = default_schedule(n, ambient_dim, ModelConstants::practical(), d_max);

  auto check_dim = [&](int d) {
    if (d < 1 || d > d_max) throw InvalidDims("override dimension outside [1, d_max]");
  };
  for (const auto& m : {ov.h_par, ov.h_perp, ov.r, ov.delta, ov.kappa})
    for (const auto& [d, v] : m) check_dim(d);
  for (const auto& [d, v] : ov.n_min) check_dim(d);

  for (int d = 1; d <= d_max; ++d) {
    DimParams& p = sched.dims[static_cast<size_t>(d) - 1];
    if (auto it = ov.kappa.find(d); it != ov.kappa.end()) p.kappa = it->second;
    const bool h_over = ov.h_par.count(d) > 0;
    if (h_over) p.h_par = ov.h_par.at(d);
    // dependent quantities follow h_par unless themselves overridden
    if (h_over || ov.kappa.count(d)) {
      p.h_perp = p.kappa * p.h_par * p.h_par;
      p.delta = ModelConstants::practical().zeta_at(d) * p.kappa * p.h_par * p.h_par;
      if (h_over) p.r = p.h_par;
    }
    if (auto it = ov.h_perp.find(d); it != ov.h_perp.end()) {
      if (ov.h_par.count(d) && ov.kappa.count(d)) {
        const double expected = ov.kappa.at(d) * ov.h_par.at(d) * ov.h_par.at(d);
        if (std::abs(it->second - expected) > 1e-12 * std::max(1.0, expected))
          throw InconsistentOverride("h_perp override must equal kappa * h_par^2");
      }
      p.h_perp = it->second;
    }
    if (auto it = ov.r.find(d); it != ov.r.end()) p.r = it->second;
    if (auto it = ov.delta.find(d); it != ov.delta.end()) p.delta = it->second;
    if (auto it = ov.n_min.find(d); it != ov.n_min.end()) p.n_min = it->second;
  }

  sched.validate();
  return sched;
}

}  // namespace slabeling

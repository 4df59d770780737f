#include "accel/lyapunov.hpp"

#include "accel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace accel {
namespace {

const TraceRecord& record_at(const Trace& trace, std::int64_t k) {
  if (k < 0 || k >= static_cast<std::int64_t>(trace.records.size())) {
    throw RangeError("iteration " + std::to_string(k) + " is outside the trace (0.." +
                     std::to_string(static_cast<std::int64_t>(trace.records.size()) - 1) + ")");
  }
  return trace.records[static_cast<std::size_t>(k)];
}

void require_momentum(const Trace& trace) {
  if (!uses_momentum_r(trace.params.algo)) {
    throw UnsupportedError("canonical sequences and energies are defined for the NAG family, not " +
                           std::string(to_string(trace.params.algo)));
  }
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

Vector seq_R(const Trace& trace, std::int64_t k) {
  require_momentum(trace);
  const auto& rec = record_at(trace, k);
  const double s = trace.params.step;
  const double r = trace.params.momentum_r;
  return (static_cast<double>(k) - 1.0) * std::sqrt(s) * rec.v + r * rec.x;
}

Vector seq_S(const Trace& trace, std::int64_t k) {
  const auto& rec = record_at(trace, k);
  const double s = trace.params.step;
  const double r = trace.params.momentum_r;
  return seq_R(trace, k) - (static_cast<double>(k) + r) * s * rec.first_order_map;
}

Vector seq_T(const Trace& trace, std::int64_t k) {
  require_momentum(trace);
  const auto& rec = record_at(trace, k);
  const double s = trace.params.step;
  const double r = trace.params.momentum_r;
  const auto kd = static_cast<double>(k);
  return (kd + r) * rec.y - kd * rec.x - (kd + r) * s * rec.first_order_map;
}

std::string_view to_string(EnergyForm form) {
  return form == EnergyForm::kVelocity ? "velocity" : "xy";
}

EnergyForm parse_energy_form(std::string_view name) {
  if (name == "velocity") return EnergyForm::kVelocity;
  if (name == "xy") return EnergyForm::kXY;
  throw ConfigError("unknown energy form '" + std::string(name) + "' (expected velocity or xy)");
}

EnergyForm default_energy_form(Algorithm algo) {
  return is_monotone(algo) ? EnergyForm::kXY : EnergyForm::kVelocity;
}

EnergyBreakdown energy(const Trace& trace, std::int64_t k, const OptimumInfo& optimum,
                       EnergyForm form) {
  require_momentum(trace);
  if (form == EnergyForm::kVelocity && is_monotone(trace.params.algo)) {
    throw UnsupportedError("the velocity energy form is not defined for " +
                           std::string(to_string(trace.params.algo)) + "; use xy");
  }
  const auto& rec = record_at(trace, k);
  const auto& next = record_at(trace, k + 1);
  if (optimum.x_star.size() != rec.x.size()) {
    throw DimensionError("optimum and trace dimensions differ");
  }

  const double s = trace.params.step;
  const double r = trace.params.momentum_r;
  const auto kd = static_cast<double>(k);

  EnergyBreakdown e;
  e.k = k;
  e.tau = (kd + 1.0) * (kd + r + 1.0);
  e.potential = s * e.tau * (next.objective - optimum.f_star);

  Vector base;
  if (form == EnergyForm::kVelocity) {
    base = (kd - 1.0) * std::sqrt(s) * rec.v + r * (rec.x - optimum.x_star);
  } else {
    base = kd * (rec.y - rec.x) + r * (rec.y - optimum.x_star);
  }
  base -= (kd + r) * s * rec.first_order_map;
  e.mixed = 0.5 * base.squaredNorm();
  e.total = e.potential + e.mixed;
  return e;
}

std::int64_t threshold_K(double r) {
  if (!(r >= 2.0)) throw ParameterError("threshold K needs r >= 2, got " + std::to_string(r));
  const double raw = (3.0 * r * r - 4.0 * r - 12.0) / 8.0;
  return static_cast<std::int64_t>(std::ceil(std::max(0.0, raw)));
}

double contraction_rate(double mu, double lipschitz, double s) {
  return mu * s * (1.0 - lipschitz * s) / 4.0;
}

double theorem_bound(std::int64_t k, double r, double s, double lipschitz, double mu,
                     double f1_gap, double x1_dist_sq) {
  if (k < 1) throw RangeError("the rate bound starts at k = 1");
  const auto kd = static_cast<double>(k);
  const double numerator = (r + 1.0) * f1_gap + r * r * lipschitz * x1_dist_sq;
  const double factor = std::pow(1.0 + contraction_rate(mu, lipschitz, s), kd);
  return numerator / (kd * (kd + r) * factor);
}

Tolerance default_tolerance(const OptimumInfo& optimum) {
  if (optimum.source == OptimumSource::kReferenceRun) return {1e-6, 1e-9};
  return {};
}

std::optional<std::int64_t> Certificate::first_failure() const {
  for (const auto& row : rows) {
    if (!row.bound_ok || !row.decrease_ok) return row.k;
  }
  return std::nullopt;
}

Certificate certify(const Trace& trace, const CompositeObjective& problem,
                    const OptimumInfo& optimum, EnergyForm form, Tolerance tol) {
  require_momentum(trace);
  const double r = trace.params.momentum_r;
  const double s = trace.params.step;
  const double mu = problem.smooth().mu();
  const double lipschitz = problem.smooth().lipschitz();

  Certificate cert;
  cert.threshold_K = threshold_K(r);
  cert.rate = contraction_rate(mu, lipschitz, s);

  const auto n = static_cast<std::int64_t>(trace.records.size());
  const std::int64_t first_bound_k = std::max<std::int64_t>(1, cert.threshold_K);
  if (n < first_bound_k + 2) {
    throw RangeError("trace has " + std::to_string(n) + " records; certification needs at least " +
                     std::to_string(first_bound_k + 2));
  }

  const auto& first = record_at(trace, 1);
  const double f1_gap = first.objective - optimum.f_star;
  const double x1_dist_sq = (first.x - optimum.x_star).squaredNorm();

  std::vector<double> energies;
  energies.reserve(static_cast<std::size_t>(n - 1));
  for (std::int64_t k = 0; k + 1 < n; ++k) {
    energies.push_back(energy(trace, k, optimum, form).total);
  }

  cert.rows.reserve(static_cast<std::size_t>(n));
  bool pass = true;
  for (std::int64_t k = 0; k < n; ++k) {
    CertificateRow row;
    row.k = k;
    row.gap = trace.records[static_cast<std::size_t>(k)].objective - optimum.f_star;
    if (k >= first_bound_k) {
      const double bound = theorem_bound(k, r, s, lipschitz, mu, f1_gap, x1_dist_sq);
      row.bound = bound;
      row.bound_ok = row.gap <= bound * (1.0 + tol.rel) + tol.abs;
    }
    if (k + 1 < n) row.energy = energies[static_cast<std::size_t>(k)];
    if (k >= cert.threshold_K && k + 2 < n) {
      const double now = energies[static_cast<std::size_t>(k)];
      const double later = energies[static_cast<std::size_t>(k + 1)];
      const double allowed = now / (1.0 + cert.rate);
      row.decrease_margin = allowed - later;
      row.decrease_ok = later <= allowed * (1.0 + tol.rel) + tol.abs;
    }
    pass = pass && row.bound_ok && row.decrease_ok;
    cert.rows.push_back(row);
  }
  cert.overall_pass = pass;
  return cert;
}

nlohmann::json to_json(const Certificate& certificate) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : certificate.rows) {
    rows.push_back({{"k", row.k},
                    {"gap", row.gap},
                    {"bound", optional_number(row.bound)},
                    {"energy", optional_number(row.energy)},
                    {"decrease_margin", optional_number(row.decrease_margin)}});
  }
  return {{"K", certificate.threshold_K}, {"pass", certificate.overall_pass}, {"rows", rows}};
}

}  // namespace accel

#pragma once

#include "accel/algorithms.hpp"
#include "accel/problems.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace accel {

/// Canonical sequences built from a NAG-family trace. Step size s and
/// momentum r are read from trace.params; m_k is the stored first-order map.
///
///   R_k = (k - 1) sqrt(s) v_k + r x_k
///   S_k = R_k - (k + r) s m_k
///   T_k = (k + r) y_k - k x_k - (k + r) s m_k
///
/// S_k and T_k coincide whenever y_k = x_k + ((k - 1)/(k + r)) sqrt(s) v_k.
/// All three throw RangeError for k outside the trace and UnsupportedError
/// for traces without a momentum parameter (gd, nag-sc, m-nag-sc).
Vector seq_R(const Trace& trace, std::int64_t k);
Vector seq_S(const Trace& trace, std::int64_t k);
Vector seq_T(const Trace& trace, std::int64_t k);

/// kVelocity uses (k-1) sqrt(s) v_k + r (x_k - x*) as the mixed-energy
/// base; kXY uses k (y_k - x_k) + r (y_k - x*). They agree on NAG and FISTA
/// traces. Only kXY is defined for the monotone schemes.
enum class EnergyForm { kVelocity, kXY };

std::string_view to_string(EnergyForm form);
EnergyForm parse_energy_form(std::string_view name);
/// kXY for monotone schemes, kVelocity otherwise.
EnergyForm default_energy_form(Algorithm algo);

struct EnergyBreakdown {
  std::int64_t k = 0;
  double tau = 0.0;        ///< (k + 1)(k + r + 1)
  double potential = 0.0;  ///< s tau (F(x_{k+1}) - F*)
  double mixed = 0.0;      ///< half squared norm of the canonical vector
  double total = 0.0;
};

/// Needs records k and k + 1.
EnergyBreakdown energy(const Trace& trace, std::int64_t k, const OptimumInfo& optimum,
                       EnergyForm form);

/// ceil(max{0, (3r^2 - 4r - 12)/8}). Throws ParameterError for r < 2.
std::int64_t threshold_K(double r);

/// mu s (1 - L s) / 4, the per-step energy contraction.
double contraction_rate(double mu, double lipschitz, double s);

/// [(r+1) gap_1 + r^2 L ||x_1 - x*||^2] / [k (k + r) (1 + (1 - L s) mu s / 4)^k]
/// for k >= 1.
double theorem_bound(std::int64_t k, double r, double s, double lipschitz, double mu,
                     double f1_gap, double x1_dist_sq);

struct Tolerance {
  double rel = 1e-8;
  double abs = 1e-12;
};

/// Tolerance matched to how the optimum was obtained: {1e-8, 1e-12} for
/// analytic optima, {1e-6, 1e-9} for reference runs, whose F* carries the
/// reference solver's error and whose energies bottom out near 1e-12.
Tolerance default_tolerance(const OptimumInfo& optimum);

struct CertificateRow {
  std::int64_t k = 0;
  double gap = 0.0;
  std::optional<double> bound;            ///< k >= max{1, K}
  bool bound_ok = true;
  std::optional<double> energy;           ///< while record k + 1 exists
  std::optional<double> decrease_margin;  ///< E(k)/(1 + rate) - E(k+1), k >= K
  bool decrease_ok = true;
};

struct Certificate {
  std::int64_t threshold_K = 0;
  double rate = 0.0;
  std::vector<CertificateRow> rows;
  bool overall_pass = false;

  std::optional<std::int64_t> first_failure() const;
};

/// Checks the rate bound for k >= max{1, K} and the energy decrease
/// E(k+1) <= E(k) / (1 + rate) for k >= K along the whole trace, each with
/// relative-plus-absolute slack. mu and L come from problem.smooth().
Certificate certify(const Trace& trace, const CompositeObjective& problem,
                    const OptimumInfo& optimum, EnergyForm form, Tolerance tol = {});

/// {"K": int, "pass": bool, "rows": [{"k", "gap", "bound", "energy",
/// "decrease_margin"}]}, with null for quantities not defined at a row.
nlohmann::json to_json(const Certificate& certificate);

}  // namespace accel

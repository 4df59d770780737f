#pragma once

#include "accel/algorithms.hpp"
#include "accel/lyapunov.hpp"
#include "accel/problems.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace accel {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCertificationFailed = 2;

enum class TraceFormat { kCsv, kJson };

std::string_view to_string(TraceFormat format);
TraceFormat parse_trace_format(std::string_view name);

struct OutputSpec {
  std::optional<std::filesystem::path> trace_path;
  std::optional<std::filesystem::path> certificate_path;
  TraceFormat format = TraceFormat::kCsv;
};

struct ExperimentConfig {
  std::string problem;
  Algorithm algo = Algorithm::kNag;
  double step = 0.0;
  std::optional<double> momentum_r;
  std::int64_t iters = 200;
  /// nullopt means the all-ones vector of the problem's dimension.
  std::optional<Vector> x0;
  OutputSpec outputs;
  bool certify = false;
  /// nullopt means auto: xy for monotone schemes, velocity otherwise.
  std::optional<EnergyForm> energy_form;
};

/// Parses the flags of the `run` subcommand (without the subcommand name).
/// Flags: --problem, --algo, --step, --r, --iters, --x0, --trace,
/// --certificate, --format, --certify, --energy-form, --config FILE.
/// Throws ConfigError on unknown names, malformed values or a missing --r
/// for schemes that use it.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Same fields as JSON: {"problem", "algo", "step", "r", "iters", "x0",
/// "trace", "certificate", "format", "certify", "energy_form"}.
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Checks the config against the resolved problem (step in (0, 1/L), x0
/// dimension, certificate availability for the chosen scheme).
void validate_config(const ExperimentConfig& config, const ResolvedProblem& problem);

RunParams run_params(const ExperimentConfig& config);

struct ExperimentResult {
  Trace trace;
  OptimumInfo optimum;
  std::optional<Certificate> certificate;
  int exit_code = kExitOk;
  std::string summary;
};

/// Resolves the problem, runs, certifies if asked and writes the requested
/// files. exit_code is kExitCertificationFailed when a certificate fails.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, const ResolvedProblem& problem);

/// CSV columns: k, f_gap, grad_norm, x1..xd, y1..yd, monotone_violation,
/// energy, bound (the last two blank without a certificate). The JSON form
/// carries the same columns per record plus everything needed to rebuild
/// the trace (v, z, objective, first_order_map, run parameters).
void write_trace(std::ostream& out, const Trace& trace, const OptimumInfo& optimum,
                 const Certificate* certificate, TraceFormat format);
void emit_trace(const Trace& trace, const OptimumInfo& optimum, const Certificate* certificate,
                TraceFormat format, const std::filesystem::path& path);

/// Rebuilds a trace from the JSON form written by emit_trace.
Trace read_trace_json(const std::filesystem::path& path);

/// "fig1": nag and m-nag on quad2d with s = 0.4, r = 2.
/// "fig2": gd, nag-sc and m-nag-sc on quad2d with s = 0.01.
/// Both start at (1, 1). Output files land in outdir when it is non-empty.
std::vector<ExperimentConfig> preset(std::string_view name,
                                     const std::filesystem::path& outdir = {});

/// Entry point of the `accel` command line tool.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace accel

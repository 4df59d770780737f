#include "accel/harness.hpp"

#include "accel/errors.hpp"
#include "accel/proximal.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

namespace accel {
namespace {

using nlohmann::json;

// Raw flag values of the `run` subcommand before validation.
struct RunFlags {
  std::string config_file;
  std::string problem;
  std::string algo;
  double step = 0.0;
  double r = 2.0;
  std::int64_t iters = 200;
  std::string x0 = "ones";
  std::string trace;
  std::string certificate;
  std::string format = "csv";
  bool certify = false;
  std::string energy_form = "auto";

  CLI::Option* config_opt = nullptr;
  CLI::Option* problem_opt = nullptr;
  CLI::Option* algo_opt = nullptr;
  CLI::Option* step_opt = nullptr;
  CLI::Option* r_opt = nullptr;
  CLI::Option* iters_opt = nullptr;
  CLI::Option* x0_opt = nullptr;
  CLI::Option* trace_opt = nullptr;
  CLI::Option* certificate_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* certify_opt = nullptr;
  CLI::Option* energy_form_opt = nullptr;
};

void add_run_flags(CLI::App& app, RunFlags& f) {
  f.config_opt = app.add_option("--config", f.config_file, "JSON experiment file");
  f.problem_opt =
      app.add_option("--problem", f.problem, "quad2d | quad-diag:<c1,...> | lasso:<path>");
  f.algo_opt = app.add_option("--algo", f.algo,
                              "gd | nag | nag-phase | m-nag | fista | m-fista | nag-sc | m-nag-sc");
  f.step_opt = app.add_option("--step", f.step, "step size s in (0, 1/L)");
  f.r_opt = app.add_option("--r", f.r, "momentum parameter r >= 2");
  f.iters_opt = app.add_option("--iters", f.iters, "number of iterations (default 200)");
  f.x0_opt = app.add_option("--x0", f.x0, "initial point: 'ones' or comma-separated values");
  f.trace_opt = app.add_option("--trace", f.trace, "trace output path");
  f.certificate_opt =
      app.add_option("--certificate", f.certificate, "certificate output path (implies --certify)");
  f.format_opt = app.add_option("--format", f.format, "trace format: csv | json");
  f.certify_opt = app.add_flag("--certify", f.certify, "check the convergence certificate");
  f.energy_form_opt =
      app.add_option("--energy-form", f.energy_form, "auto | velocity | xy");
}

Vector parse_vector(std::string_view text) {
  std::vector<double> values;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("malformed vector entry '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("malformed vector entry '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("empty vector '" + std::string(text) + "'");
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::optional<Vector> parse_x0(std::string_view text) {
  if (text == "ones") return std::nullopt;
  return parse_vector(text);
}

std::optional<EnergyForm> parse_energy_choice(std::string_view text) {
  if (text == "auto") return std::nullopt;
  return parse_energy_form(text);
}

// Structural checks that need no problem instance.
void check_config(const ExperimentConfig& c) {
  if (c.problem.empty()) throw ConfigError("missing --problem");
  if (!std::isfinite(c.step)) throw ConfigError("missing or non-finite --step");
  if (uses_momentum_r(c.algo) && !c.momentum_r) {
    throw ConfigError("algorithm " + std::string(to_string(c.algo)) +
                      " requires the momentum parameter --r");
  }
  if (c.momentum_r && uses_momentum_r(c.algo) && !(*c.momentum_r >= 2.0)) {
    throw ConfigError("--r must be at least 2");
  }
  if (c.iters <= 0) throw ConfigError("--iters must be positive");
}

ExperimentConfig finalize(const RunFlags& f) {
  ExperimentConfig c;
  c.step = std::numeric_limits<double>::quiet_NaN();
  bool algo_set = false;
  if (f.config_opt->count() > 0) {
    c = parse_config_file(f.config_file);
    algo_set = true;
  }
  if (f.problem_opt->count() > 0) c.problem = f.problem;
  if (f.algo_opt->count() > 0) {
    c.algo = parse_algorithm(f.algo);
    algo_set = true;
  }
  if (!algo_set) throw ConfigError("missing --algo");
  if (f.step_opt->count() > 0) c.step = f.step;
  if (f.r_opt->count() > 0) c.momentum_r = f.r;
  if (f.iters_opt->count() > 0) c.iters = f.iters;
  if (f.x0_opt->count() > 0) c.x0 = parse_x0(f.x0);
  if (f.trace_opt->count() > 0) c.outputs.trace_path = f.trace;
  if (f.certificate_opt->count() > 0) {
    c.outputs.certificate_path = f.certificate;
    c.certify = true;
  }
  if (f.format_opt->count() > 0) c.outputs.format = parse_trace_format(f.format);
  if (f.certify_opt->count() > 0) c.certify = c.certify || f.certify;
  if (f.energy_form_opt->count() > 0) c.energy_form = parse_energy_choice(f.energy_form);
  check_config(c);
  return c;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Per-record columns shared by the CSV and JSON writers.
struct RowView {
  double gap;
  double grad_norm;
  int monotone_violation;
  std::optional<double> energy;
  std::optional<double> bound;
};

RowView row_view(const Trace& trace, std::size_t i, const OptimumInfo& optimum,
                 const Certificate* certificate) {
  const auto& rec = trace.records[i];
  RowView row{rec.objective - optimum.f_star, rec.first_order_map.norm(),
              i > 0 && rec.objective > trace.records[i - 1].objective ? 1 : 0, std::nullopt,
              std::nullopt};
  if (certificate != nullptr && i < certificate->rows.size()) {
    row.energy = certificate->rows[i].energy;
    row.bound = certificate->rows[i].bound;
  }
  return row;
}

void write_csv(std::ostream& out, const Trace& trace, const OptimumInfo& optimum,
               const Certificate* certificate) {
  const Eigen::Index d = trace.records.empty() ? 0 : trace.records.front().x.size();
  out << "k,f_gap,grad_norm";
  for (Eigen::Index i = 1; i <= d; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= d; ++i) out << ",y" << i;
  out << ",monotone_violation,energy,bound\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    const RowView row = row_view(trace, i, optimum, certificate);
    out << rec.k << ',' << fmt17(row.gap) << ',' << fmt17(row.grad_norm);
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << fmt17(rec.x[j]);
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << fmt17(rec.y[j]);
    out << ',' << row.monotone_violation << ',';
    if (row.energy) out << fmt17(*row.energy);
    out << ',';
    if (row.bound) out << fmt17(*row.bound);
    out << '\n';
  }
}

json trace_json(const Trace& trace, const OptimumInfo& optimum, const Certificate* certificate) {
  json records = json::array();
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    const RowView row = row_view(trace, i, optimum, certificate);
    records.push_back({
        {"k", rec.k},
        {"f_gap", row.gap},
        {"grad_norm", row.grad_norm},
        {"x", vector_json(rec.x)},
        {"y", vector_json(rec.y)},
        {"monotone_violation", row.monotone_violation},
        {"energy", row.energy ? json(*row.energy) : json(nullptr)},
        {"bound", row.bound ? json(*row.bound) : json(nullptr)},
        {"v", vector_json(rec.v)},
        {"z", rec.z ? vector_json(*rec.z) : json(nullptr)},
        {"objective", rec.objective},
        {"first_order_map", vector_json(rec.first_order_map)},
    });
  }
  return {{"problem", trace.problem_id},
          {"algo", to_string(trace.params.algo)},
          {"step", trace.params.step},
          {"r", trace.params.momentum_r},
          {"iters", trace.params.iters},
          {"f_star", optimum.f_star},
          {"records", records}};
}

std::string summarize(const ExperimentConfig& config, const ResolvedProblem& problem,
                      const Trace& trace, const std::optional<Certificate>& cert) {
  std::ostringstream s;
  s << to_string(config.algo) << " on " << problem.id << ": " << trace.params.iters
    << " iterations, final gap " << fmt17(trace.records.back().objective - problem.optimum.f_star);
  if (cert) {
    if (cert->overall_pass) {
      s << ", certificate PASS (K=" << cert->threshold_K << ")";
    } else {
      s << ", certificate FAIL at k=" << cert->first_failure().value_or(-1)
        << " (K=" << cert->threshold_K << ")";
    }
  }
  return s.str();
}

void write_certificate(const Certificate& cert, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << to_json(cert).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string> reversed(std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace

std::string_view to_string(TraceFormat format) {
  return format == TraceFormat::kCsv ? "csv" : "json";
}

TraceFormat parse_trace_format(std::string_view name) {
  if (name == "csv") return TraceFormat::kCsv;
  if (name == "json") return TraceFormat::kJson;
  throw ConfigError("unknown trace format '" + std::string(name) + "' (expected csv or json)");
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"run"};
  RunFlags flags;
  add_run_flags(app, flags);
  try {
    auto rev = reversed(args);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  return finalize(flags);
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  ExperimentConfig c;
  c.step = std::numeric_limits<double>::quiet_NaN();
  try {
    json doc;
    in >> doc;
    c.problem = doc.at("problem").get<std::string>();
    c.algo = parse_algorithm(doc.at("algo").get<std::string>());
    c.step = doc.at("step").get<double>();
    if (doc.contains("r")) c.momentum_r = doc["r"].get<double>();
    if (doc.contains("iters")) c.iters = doc["iters"].get<std::int64_t>();
    if (doc.contains("x0")) {
      const auto& x0 = doc["x0"];
      if (x0.is_string()) {
        c.x0 = parse_x0(x0.get<std::string>());
      } else {
        c.x0 = vector_from_json(x0);
      }
    }
    if (doc.contains("trace")) c.outputs.trace_path = doc["trace"].get<std::string>();
    if (doc.contains("certificate")) {
      c.outputs.certificate_path = doc["certificate"].get<std::string>();
      c.certify = true;
    }
    if (doc.contains("format")) c.outputs.format = parse_trace_format(doc["format"].get<std::string>());
    if (doc.contains("certify")) c.certify = c.certify || doc["certify"].get<bool>();
    if (doc.contains("energy_form")) {
      c.energy_form = parse_energy_choice(doc["energy_form"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  check_config(c);
  return c;
}

RunParams run_params(const ExperimentConfig& config) {
  RunParams p;
  p.algo = config.algo;
  p.step = config.step;
  p.momentum_r = config.momentum_r.value_or(2.0);
  p.iters = config.iters;
  return p;
}

void validate_config(const ExperimentConfig& config, const ResolvedProblem& problem) {
  check_config(config);
  check_step_size(config.step, problem.objective.smooth().lipschitz());
  if (config.x0 && config.x0->size() != problem.objective.dim()) {
    throw ConfigError("--x0 has " + std::to_string(config.x0->size()) + " entries but " +
                      problem.id + " has dimension " + std::to_string(problem.objective.dim()));
  }
  if (config.certify && !uses_momentum_r(config.algo)) {
    throw ConfigError("no convergence certificate is available for " +
                      std::string(to_string(config.algo)));
  }
  if (config.energy_form == EnergyForm::kVelocity && is_monotone(config.algo)) {
    throw ConfigError("the velocity energy form is not defined for " +
                      std::string(to_string(config.algo)));
  }
  validate(run_params(config), problem.objective);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  check_config(config);
  return run_experiment(config, resolve_problem(config.problem));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ResolvedProblem& problem) {
  validate_config(config, problem);
  const Vector x0 = config.x0.value_or(Vector::Ones(problem.objective.dim()));

  ExperimentResult result;
  result.trace = run(problem.objective, run_params(config), x0, problem.id);
  result.optimum = problem.optimum;
  if (config.certify) {
    const EnergyForm form = config.energy_form.value_or(default_energy_form(config.algo));
    result.certificate = certify(result.trace, problem.objective, problem.optimum, form,
                                  default_tolerance(problem.optimum));
    if (!result.certificate->overall_pass) result.exit_code = kExitCertificationFailed;
  }
  if (config.outputs.trace_path) {
    emit_trace(result.trace, result.optimum,
               result.certificate ? &*result.certificate : nullptr, config.outputs.format,
               *config.outputs.trace_path);
  }
  if (config.outputs.certificate_path && result.certificate) {
    write_certificate(*result.certificate, *config.outputs.certificate_path);
  }
  result.summary = summarize(config, problem, result.trace, result.certificate);
  return result;
}

void write_trace(std::ostream& out, const Trace& trace, const OptimumInfo& optimum,
                 const Certificate* certificate, TraceFormat format) {
  if (format == TraceFormat::kCsv) {
    write_csv(out, trace, optimum, certificate);
  } else {
    out << trace_json(trace, optimum, certificate).dump() << '\n';
  }
}

void emit_trace(const Trace& trace, const OptimumInfo& optimum, const Certificate* certificate,
                TraceFormat format, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_trace(out, trace, optimum, certificate, format);
  if (!out) throw IoError("failed writing " + path.string());
}

Trace read_trace_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace " + path.string());
  Trace trace;
  try {
    json doc;
    in >> doc;
    trace.problem_id = doc.at("problem").get<std::string>();
    trace.params.algo = parse_algorithm(doc.at("algo").get<std::string>());
    trace.params.step = doc.at("step").get<double>();
    trace.params.momentum_r = doc.at("r").get<double>();
    trace.params.iters = doc.at("iters").get<std::int64_t>();
    for (const auto& j : doc.at("records")) {
      TraceRecord rec;
      rec.k = j.at("k").get<std::int64_t>();
      rec.x = vector_from_json(j.at("x"));
      rec.y = vector_from_json(j.at("y"));
      rec.v = vector_from_json(j.at("v"));
      if (!j.at("z").is_null()) rec.z = vector_from_json(j.at("z"));
      rec.objective = j.at("objective").get<double>();
      rec.first_order_map = vector_from_json(j.at("first_order_map"));
      trace.records.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed trace " + path.string() + ": " + e.what());
  }
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    if (trace.records[i].k != static_cast<std::int64_t>(i)) {
      throw ConfigError("trace " + path.string() + " has non-contiguous iteration indices");
    }
  }
  return trace;
}

std::vector<ExperimentConfig> preset(std::string_view name, const std::filesystem::path& outdir) {
  struct Entry {
    Algorithm algo;
    bool certify;
  };
  std::vector<Entry> entries;
  double step = 0.0;
  std::int64_t iters = 0;
  if (name == "fig1") {
    entries = {{Algorithm::kNag, true}, {Algorithm::kMNag, true}};
    step = 0.4;
    iters = 200;
  } else if (name == "fig2") {
    entries = {{Algorithm::kGd, false}, {Algorithm::kNagSc, false}, {Algorithm::kMNagSc, false}};
    step = 0.01;
    iters = 2000;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig1 or fig2)");
  }

  std::vector<ExperimentConfig> configs;
  for (const auto& e : entries) {
    ExperimentConfig c;
    c.problem = "quad2d";
    c.algo = e.algo;
    c.step = step;
    if (uses_momentum_r(e.algo)) c.momentum_r = 2.0;
    c.iters = iters;
    c.x0 = Vector{{1.0, 1.0}};
    c.certify = e.certify;
    if (!outdir.empty()) {
      const std::string stem = std::string(name) + "-" + std::string(to_string(e.algo));
      c.outputs.trace_path = outdir / (stem + ".csv");
      if (e.certify) c.outputs.certificate_path = outdir / (stem + ".certificate.json");
    }
    configs.push_back(std::move(c));
  }
  return configs;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Accelerated first-order methods with Lyapunov convergence certificates", "accel"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run one algorithm on one problem");
  RunFlags run_flags;
  add_run_flags(*run_cmd, run_flags);

  auto* preset_cmd = app.add_subcommand("preset", "run a figure preset (fig1 or fig2)");
  std::string preset_name;
  std::string outdir = ".";
  preset_cmd->add_option("name", preset_name, "fig1 | fig2")->required();
  preset_cmd->add_option("--outdir", outdir, "directory for traces and certificates");

  auto* certify_cmd = app.add_subcommand("certify", "re-certify a JSON trace");
  std::string trace_path;
  std::string problem_name;
  std::string energy_form = "auto";
  std::string certificate_path;
  certify_cmd->add_option("--trace", trace_path, "trace written with --format json")->required();
  certify_cmd->add_option("--problem", problem_name, "problem the trace was run on")->required();
  certify_cmd->add_option("--energy-form", energy_form, "auto | velocity | xy");
  certify_cmd->add_option("--certificate", certificate_path, "certificate output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const auto result = run_experiment(finalize(run_flags));
      out << result.summary << '\n';
      return result.exit_code;
    }
    if (preset_cmd->parsed()) {
      const auto configs = preset(preset_name, outdir);
      std::vector<std::future<ExperimentResult>> jobs;
      for (const auto& c : configs) {
        jobs.push_back(std::async(std::launch::async, [&c] { return run_experiment(c); }));
      }
      int code = kExitOk;
      for (auto& job : jobs) {
        const auto result = job.get();
        out << result.summary << '\n';
        code = std::max(code, result.exit_code);
      }
      return code;
    }
    if (certify_cmd->parsed()) {
      const Trace trace = read_trace_json(trace_path);
      const ResolvedProblem problem = resolve_problem(problem_name);
      if (!uses_momentum_r(trace.params.algo)) {
        throw ConfigError("no convergence certificate is available for " +
                          std::string(to_string(trace.params.algo)));
      }
      const EnergyForm form = parse_energy_choice(energy_form)
                                  .value_or(default_energy_form(trace.params.algo));
      const Certificate cert = certify(trace, problem.objective, problem.optimum, form,
                                       default_tolerance(problem.optimum));
      if (!certificate_path.empty()) write_certificate(cert, certificate_path);
      out << to_string(trace.params.algo) << " trace on " << problem.id << ": "
          << (cert.overall_pass ? "certificate PASS" : "certificate FAIL");
      if (!cert.overall_pass) out << " at k=" << cert.first_failure().value_or(-1);
      out << " (K=" << cert.threshold_K << ")\n";
      return cert.overall_pass ? kExitOk : kExitCertificationFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace accel

#include "hrbc/cli/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hrbc/backend/backend.hpp"
#include "hrbc/diagnostics.hpp"
#include "hrbc/frontend/checker.hpp"
#include "hrbc/frontend/parser.hpp"
#include "hrbc/reducer/reducer.hpp"
#include "hrbc/sim/simulator.hpp"
#include "hrbc/translator/translator.hpp"

namespace hrbc::cli {
namespace {

/// Bad command-line input discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model problem already reported on the error stream.
struct ReportedError {};

struct PipelineOptions {
  std::string input;
  std::vector<std::string> queues;
  int timer_pool = 1;
  int arg_pool = 4;
  std::size_t max_configs = 200000;
  bool aggregate = false;
  std::optional<std::string> forbidden;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool color;
};

bool color_wanted(const std::ostream& err) {
  const char* env = std::getenv("HRBC_COLOR");
  if (env && std::string(env) == "0") return false;
  return &err == &std::cerr && isatty(STDERR_FILENO);
}

void add_pipeline_options(CLI::App& cmd, PipelineOptions& p) {
  cmd.add_option("input", p.input, "Model file")->required();
  cmd.add_option("--queue", p.queues,
                 "Queue bound: default=<n> or <rebec>=<n> (repeatable; default=1)");
  cmd.add_option("--timer-pool", p.timer_pool, "Timer variable pool size")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--arg-pool", p.arg_pool, "Argument variable pool size")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--max-configs", p.max_configs, "Exploration cutoff")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--aggregate", p.aggregate, "Collapse urgent locations");
}

translator::Limits limits_of(const PipelineOptions& p) {
  translator::Limits limits;
  limits.timer_pool = p.timer_pool;
  limits.arg_pool = p.arg_pool;
  limits.max_configs = p.max_configs;
  for (const std::string& q : p.queues) {
    const auto eq = q.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--queue expects <rebec>=<n>: " + q);
    const std::string name = q.substr(0, eq);
    const std::string value = q.substr(eq + 1);
    int bound = 0;
    std::istringstream in(value);
    if (!(in >> bound) || !in.eof() || bound < 1) {
      throw UsageError("--queue bound must be a positive integer: " + q);
    }
    if (name == "default") {
      limits.default_queue = bound;
    } else {
      limits.queue[name] = bound;
    }
  }
  return limits;
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string default_basename(const std::string& input) {
  std::string name = std::filesystem::path(input).filename().string();
  for (const char* ext : {".ha.json", ".hrebeca", ".json"}) {
    if (ends_with(name, ext)) return name.substr(0, name.size() - std::string(ext).size());
  }
  return name;
}

void report(const Context& ctx, const Diagnostic& d, const std::string& file) {
  ctx.err << format_diagnostic(d, file, ctx.color) << "\n";
}

void report_error(const Context& ctx, const std::string& file, const std::string& message) {
  report(ctx, Diagnostic{Severity::error, {}, message}, file);
}

frontend::CheckedModel load_model(const Context& ctx, const std::string& path) {
  const std::string source = read_input(path);
  frontend::CheckResult result;
  try {
    result = frontend::check(frontend::parse_source(source));
  } catch (const DiagnosticError& e) {
    report(ctx, e.diagnostic(), path);
    throw ReportedError{};
  }
  for (const Diagnostic& d : result.diagnostics) report(ctx, d, path);
  if (!result.model || has_errors(result.diagnostics)) throw ReportedError{};
  return std::move(*result.model);
}

/// Model from source (translated, optionally aggregated) or from JSON.
ha::HybridAutomaton load_automaton(const Context& ctx, const PipelineOptions& p, bool print_stats) {
  if (ends_with(p.input, ".json")) {
    auto a = backend::load_json(read_input(p.input));
    if (p.aggregate) a = reducer::aggregate(a);
    return a;
  }
  const translator::Limits limits = limits_of(p);
  const frontend::CheckedModel model = load_model(ctx, p.input);
  auto a = translator::explore(model, limits).ha;
  if (print_stats) ctx.out << ha::to_string(ha::stats(a)) << "\n";
  if (p.aggregate) {
    a = reducer::aggregate(a);
    if (print_stats) ctx.out << ha::to_string(ha::stats(a)) << "\n";
  }
  return a;
}

Expr parse_predicate(const std::string& text) {
  try {
    return normalize(frontend::parse_expression(text));
  } catch (const DiagnosticError& e) {
    throw UsageError("invalid --forbidden predicate: " + e.diagnostic().message);
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int translate(const Context& ctx, const PipelineOptions& p, const std::string& format,
              const std::string& output) {
  const ha::HybridAutomaton a = load_automaton(ctx, p, true);
  const std::string base = output.empty() ? default_basename(p.input) : output;
  if (format == "json") {
    write_file(base + ".ha.json", backend::emit_json(a));
    return exit_ok;
  }
  Expr forbidden = Expr::boolean(false);
  if (p.forbidden) {
    forbidden = parse_predicate(*p.forbidden);
  } else if (a.find_by_name("Fault")) {
    forbidden = frontend::parse_expression("loc() == Fault");
  }
  const std::string cfg = [&] {
    try {
      return backend::emit_cfg(a, forbidden);
    } catch (const backend::BackendError& e) {
      throw UsageError(e.what());
    }
  }();
  const backend::SpaceExModel model = backend::emit_spaceex(a);
  for (const std::string& w : model.warnings) {
    report(ctx, Diagnostic{Severity::warning, {}, w}, p.input);
  }
  write_file(base + ".xml", model.xml);
  write_file(base + ".cfg", cfg);
  return exit_ok;
}

int simulate(const Context& ctx, const PipelineOptions& p, const sim::Options& options,
             const std::string& trace_path) {
  const ha::HybridAutomaton a = load_automaton(ctx, p, false);
  std::optional<Expr> predicate;
  if (p.forbidden) predicate = parse_predicate(*p.forbidden);
  const sim::Trace trace = sim::simulate(a, options);
  if (!trace_path.empty()) write_file(trace_path, sim::to_csv(a, trace));
  if (trace.status != sim::Status::completed) {
    report(ctx,
           Diagnostic{Severity::note, {},
                      std::string("run ended early (") + sim::to_string(trace.status) + "): " +
                          trace.message},
           p.input);
  }
  if (predicate) {
    sim::Verdict verdict;
    try {
      verdict = sim::check_forbidden(a, trace, *predicate);
    } catch (const sim::SimulationError& e) {
      throw UsageError(e.what());
    }
    if (!verdict.safe) {
      const sim::Sample& s = trace.samples[*verdict.witness];
      ctx.out << "WITNESS t=" << s.time << " loc=" << a.location(s.location).name << "\n";
      return exit_witness;
    }
  }
  ctx.out << "SAFE\n";
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Context ctx{out, err, color_wanted(err)};
  CLI::App app{"Hybrid Rebeca to hybrid automata translator"};
  app.require_subcommand(1);

  PipelineOptions tp;
  std::string format = "spaceex";
  std::string output;
  CLI::App* tr = app.add_subcommand("translate", "Translate a model to SpaceEx or JSON");
  add_pipeline_options(*tr, tp);
  tr->add_option("--format", format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"spaceex", "json"}));
  tr->add_option("--forbidden", tp.forbidden,
                 "Forbidden-state predicate for the SpaceEx configuration (default: loc() == Fault)");
  tr->add_option("-o,--output", output, "Output basename (default: input name)");

  PipelineOptions sp;
  sim::Options so;
  std::string policy = "first";
  std::string trace_path;
  CLI::App* si = app.add_subcommand("simulate", "Simulate a model or a .ha.json automaton");
  add_pipeline_options(*si, sp);
  si->add_option("--horizon", so.horizon, "Simulated time in seconds")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  si->add_option("--dt", so.dt, "Integration step in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  si->add_option("--policy", policy, "Choice among enabled edges")
      ->capture_default_str()
      ->check(CLI::IsMember({"first", "random", "urgent-asap"}));
  si->add_option("--seed", so.seed, "Random seed")->capture_default_str();
  si->add_option("--guard-tolerance", so.guard_tolerance,
                 "Absolute tolerance for equality guards (default: derived from dt)");
  si->add_option("--forbidden", sp.forbidden, "Forbidden-state predicate");
  si->add_option("--trace", trace_path, "Write the trace as CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* failing = tr->parsed() ? tr : si->parsed() ? si : &app;
    err << failing->help();
    return exit_usage;
  }

  const PipelineOptions& p = tr->parsed() ? tp : sp;
  try {
    if (tr->parsed()) return translate(ctx, tp, format, output);
    so.policy = *sim::policy_from_string(policy);
    return simulate(ctx, sp, so, trace_path);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ReportedError&) {
    return exit_model_error;
  } catch (const DiagnosticError& e) {
    report(ctx, e.diagnostic(), p.input);
    return exit_model_error;
  } catch (const std::exception& e) {
    report_error(ctx, p.input, e.what());
    return exit_model_error;
  }
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace hrbc::cli

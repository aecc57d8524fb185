#include <cstdlib>
#include <fstream>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "qistate/cli.hpp"

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kValidation = 2, kPrecondition = 3 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("qistate");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("QISTATE_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  using namespace qistate;

  CLI::App app{"Quasi-invariant states on finite-dimensional von Neumann algebras"};
  app.set_version_flag("--version", cli::tool_version());
  app.require_subcommand(1);

  cli::Options opt;
  std::string input, out_path;
  double tol_eq = 0, tol_pos = 0;
  std::size_t cap = 0;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", input, "instance JSON file");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--tol-eq", tol_eq, "equality tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-pos", tol_pos, "positivity tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--closure-cap", cap, "maximum group order during closure")->check(CLI::PositiveNumber);
    sub->add_option("--grid-R", opt.grid_R, "half-width of the sample grid and quadrature domain");
    sub->add_option("--grid-N", opt.grid_N, "number of grid points");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--seed", opt.seed, "seed for random probes");
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"check", "cocycle table, cocycle identities, lambda, sandwich and domination bounds"},
      {"invariant", "averaged fixed element d and the invariant state psi"},
      {"implement", "unitary implementation on the standard form"},
      {"expectation", "fixed-point algebra, conditional expectation, E0 and F0"},
      {"trace", "center ergodicity, invariant trace and trace density"},
      {"counterexample", "translation and ax+b examples on L^inf(R)"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), name != "counterexample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kValidation;
  }
  if (tol_eq > 0) opt.tol_eq = tol_eq;
  if (tol_pos > 0) opt.tol_pos = tol_pos;
  if (cap > 0) opt.closure_cap = cap;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    cli::Report report;
    if (command == "counterexample") {
      report = cli::cmd_counterexample(opt);
    } else {
      spdlog::info("loading {}", input);
      const cli::Instance inst = cli::load_instance(input);
      if (command == "check") report = cli::cmd_check(inst, opt);
      else if (command == "invariant") report = cli::cmd_invariant(inst, opt);
      else if (command == "implement") report = cli::cmd_implement(inst, opt);
      else if (command == "expectation") report = cli::cmd_expectation(inst, opt);
      else report = cli::cmd_trace(inst, opt);
    }
    for (const auto& c : report.checks) {
      if (c.asserted && !c.pass) spdlog::warn("FAIL {} residual={:.3e} threshold={:.3e}", c.name, c.residual, c.threshold);
      else spdlog::debug("{} {} residual={:.3e}", c.asserted ? "ok  " : "diag", c.name, c.residual);
    }
    const std::string text = report.to_json().dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        spdlog::error("cannot write {}", out_path);
        return kValidation;
      }
      out << text;
    }
    spdlog::info("{}: {}", command, report.pass() ? "pass" : "FAIL");
    return report.pass() ? kPass : kCheckFailure;
  } catch (const InputError& e) {
    spdlog::debug("validation error: {}", e.what());
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const PreconditionError& e) {
    spdlog::debug("precondition violated: {}", e.what());
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ConsistencyError& e) {
    spdlog::debug("internal consistency check failed: {}", e.what());
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}

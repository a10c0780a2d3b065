// crdiscs classify|attach|family --config <path> [--out <dir>] [--grid N] [--svg]

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdio>

#include "commands.hpp"
#include "crdiscs/discs.hpp"
#include "crdiscs/families.hpp"
#include "scenario.hpp"

using namespace crdiscs;

namespace {

int fail(int code, const std::string& name, const std::string& what) {
  fmt::print(stderr, "error: {}: {}\n", name, what);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic discs attached to rigid hypersurfaces v = P(z, zbar)"};
  app.require_subcommand(1);

  std::string config_path;
  tool::RunOptions opts;
  int grid = 0;

  for (const char* name : {"classify", "attach", "family"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario YAML file")->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--grid", grid, "override the grid size N");
    sub->add_flag("--svg", opts.svg, "also write SVG plots");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : tool::kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  int rc = tool::kOk;
  try {
    auto cfg = tool::load_config(config_path);
    if (grid != 0) {
      if (grid < 16 || (grid & (grid - 1)) != 0) throw tool::ConfigError("--grid must be a power of two >= 16", 0);
      cfg.grid = static_cast<std::size_t>(grid);
    }
    if (command == "classify") rc = tool::cmd_classify(cfg, opts);
    else if (command == "attach") rc = tool::cmd_attach(cfg, opts);
    else rc = tool::cmd_family(cfg, opts);
  } catch (const tool::ConfigError& e) {
    return fail(tool::kConfigError, "ConfigError", e.what());
  } catch (const discs::SolverFailure& e) {
    return fail(tool::kSolverError, e.name(), e.what());
  } catch (const families::SectorOverflow& e) {
    return fail(tool::kConstructionError, e.name(), e.what());
  } catch (const families::CalibrationFailure& e) {
    return fail(tool::kConstructionError, e.name(), e.what());
  } catch (const families::SupportTouchesVertex& e) {
    return fail(tool::kConstructionError, e.name(), e.what());
  } catch (const hypersurface::InconsistentDerivatives& e) {
    return fail(tool::kConstructionError, e.name(), e.what());
  } catch (const Error& e) {
    return fail(tool::kConfigError, e.name(), e.what());
  } catch (const std::exception& e) {
    return fail(tool::kConfigError, "Error", e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fmt::print("{}: {} in {:.3f} s\n", command, rc == tool::kOk ? "ok" : "audit failure", secs);
  return rc;
}

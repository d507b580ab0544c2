#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fsmacwt/errors.hpp"
#include "fsmacwt/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw fsmacwt::ConfigError("cannot write output file '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy bounds for the finite-state multiple-access wiretap channel"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool hull = false;
  bool raw = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config (INI)")->required();
    sub->add_option("--out", out_path, "Output CSV path (default: stdout)");
    sub->add_option("--seed", seed, "Override optimizer.seed from the config");
  };
  auto* sweep = app.add_subcommand("sweep-delay", "Maximum sum rate versus feedback delay");
  auto* region = app.add_subcommand("region", "Rate-region frontiers per bound kind");
  auto* discrete = app.add_subcommand("discrete", "Finite-alphabet inner and outer bounds");
  auto* validate = app.add_subcommand("validate", "Monte Carlo check of the information terms");
  for (auto* sub : {sweep, region, discrete, validate}) add_common(sub);
  auto* hull_flag = region->add_flag("--hull", hull, "Report convex hulls (time sharing)");
  region->add_flag("--raw", raw, "Report raw unions of pentagons")->excludes(hull_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto cfg = fsmacwt::load_config(config_path);
    if (seed) cfg.optimizer.seed = *seed;
    if (hull) cfg.region.hull = true;
    if (raw) cfg.region.hull = false;

    if (sweep->parsed()) {
      emit(fsmacwt::run_sweep_delay(cfg), out_path);
    } else if (region->parsed()) {
      emit(fsmacwt::run_region(cfg), out_path);
    } else if (discrete->parsed()) {
      emit(fsmacwt::run_discrete(cfg), out_path);
    } else if (validate->parsed()) {
      const auto report = fsmacwt::run_validate(cfg);
      emit(report.csv(), out_path);
      if (!report.all_pass()) std::clog << "warning: some terms exceed the configured tolerance\n";
    }
  } catch (const fsmacwt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fsmacwt::ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fsmacwt::CardinalityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fsmacwt::GuardError& e) {
    std::cerr << "numeric guard: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fsmacwt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

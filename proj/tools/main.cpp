#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dsq/commands.hpp"
#include "dsq/errors.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::string mode = "analytic";
  std::int64_t seed = -1;      // <0: keep the config seed
  std::int64_t trials = -1;    // <0: keep the config trial count
};

void add_common(CLI::App* cmd, GlobalArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "run configuration JSON")
      ->required();
  cmd->add_option("-o,--out", args.out_path,
                  "output file (default: standard output)");
  cmd->add_option("-f,--format", args.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-m,--mode", args.mode, "evaluation mode")
      ->check(CLI::IsMember({"analytic", "mc"}));
  cmd->add_option("-s,--seed", args.seed, "override /trials/seed");
  cmd->add_option("-n,--trials", args.trials, "override /trials/n_trials");
}

dsq::RunConfig load_config(const GlobalArgs& args) {
  dsq::RunConfig config = dsq::RunConfig::load(args.config_path);
  if (args.seed >= 0) config.trials.seed = std::uint64_t(args.seed);
  if (args.trials >= 0) config.trials.n_trials = args.trials;
  return config;
}

dsq::CommandOptions command_options(const GlobalArgs& args) {
  dsq::CommandOptions opts;
  opts.format = args.format == "json" ? dsq::OutputFormat::json
                                      : dsq::OutputFormat::csv;
  opts.mode = args.mode == "mc" ? dsq::RunMode::mc : dsq::RunMode::analytic;
  return opts;
}

int with_output(const GlobalArgs& args, int (*body)(std::ostream&, void*),
                void* ctx) {
  if (args.out_path.empty()) return body(std::cout, ctx);
  std::ofstream out(args.out_path);
  if (!out) throw dsq::ConfigError("cannot open output file " + args.out_path);
  return body(out, ctx);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-species entangled photon source simulator"};
  app.require_subcommand(1);

  GlobalArgs args;
  double phi_s_pi = 0.25;
  int n_phases = 16;
  std::string sweep_path;
  std::vector<double> sweep_values;

  CLI::App* validate = app.add_subcommand("validate", "check a configuration");
  add_common(validate, args);

  CLI::App* params = app.add_subcommand("params", "derived physics parameters");
  add_common(params, args);

  CLI::App* fringes =
      app.add_subcommand("fringes", "coincidence fringe scan and fit");
  add_common(fringes, args);
  fringes->add_option("--phi-s", phi_s_pi, "signal analysis phase, units of pi");
  fringes->add_option("--points", n_phases, "idler phases in the scan")
      ->check(CLI::Range(3, 4096));

  CLI::App* bell = app.add_subcommand("bell", "CHSH correlators and S");
  add_common(bell, args);

  CLI::App* sweep =
      app.add_subcommand("sweep", "Bell estimate along one config axis");
  add_common(sweep, args);
  sweep->add_option("--path", sweep_path, "config path (JSON pointer or dots)")
      ->required();
  sweep->add_option("--values", sweep_values, "values to scan")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    const dsq::RunConfig config = load_config(args);
    const dsq::CommandOptions opts = command_options(args);

    struct Ctx {
      const dsq::RunConfig* config;
      const dsq::CommandOptions* opts;
      const CLI::App* sub;
      double phi_s_pi;
      int n_phases;
      const std::string* sweep_path;
      const std::vector<double>* sweep_values;
      const CLI::App *validate, *params, *fringes, *bell, *sweep;
    } ctx{&config,  &opts, app.get_subcommands().front(),
          phi_s_pi, n_phases, &sweep_path, &sweep_values,
          validate, params, fringes, bell, sweep};

    return with_output(
        args,
        [](std::ostream& out, void* raw) -> int {
          auto& c = *static_cast<Ctx*>(raw);
          if (c.sub == c.validate) return dsq::cmd_validate(*c.config, out);
          if (c.sub == c.params) return dsq::cmd_params(*c.config, *c.opts, out);
          if (c.sub == c.fringes) {
            dsq::CommandOptions opts = *c.opts;
            opts.phi_s_pi = c.phi_s_pi;
            opts.n_phases = c.n_phases;
            return dsq::cmd_fringes(*c.config, opts, out);
          }
          if (c.sub == c.bell) return dsq::cmd_bell(*c.config, *c.opts, out);
          return dsq::cmd_sweep(*c.config, *c.opts, *c.sweep_path,
                                *c.sweep_values, out);
        },
        &ctx);
  } catch (const dsq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return dsq::kExitConfig;
  } catch (const dsq::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return dsq::kExitNumerical;
  }
}

#include "app.hpp"

#include <algorithm>

#include <CLI11.hpp>

namespace lambda_pt::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Three-level Lambda atom with a PT-symmetric Hamiltonian", "lambda-pt"};
  std::string command;
  std::optional<std::string> config_path;
  std::vector<std::string> sets;
  std::optional<std::string> out_path;
  std::optional<std::string> format;

  app.add_option("command", command, "spectrum | evolve | sweep | validate | fig2")
      ->required()
      ->check(CLI::IsMember({"spectrum", "evolve", "sweep", "validate", "fig2"}));
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--set", sets, "key=value override (repeatable)")->allow_extra_args(false);
  app.add_option("--out", out_path, "output file (fig2: output directory)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    RunConfig cfg = load_config_file(config_path, sets);
    if (out_path) cfg.out = *out_path;
    if (format) cfg.format = parse_format(*format);

    if (command == "spectrum") return cmd_spectrum(cfg, out, err);
    if (command == "evolve") return cmd_evolve(cfg, out, err);
    if (command == "sweep") return cmd_sweep(cfg, out, err);
    if (command == "validate") return cmd_validate(cfg, out, err);
    return cmd_fig2(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "lambda-pt: config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidParams& e) {
    err << "lambda-pt: config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const StepOverflow& e) {
    err << "lambda-pt: numerical overflow: " << e.what() << '\n';
    return kExitOverflow;
  } catch (const ExceptionalPointError& e) {
    err << "lambda-pt: exceptional point: " << e.what() << '\n';
    return kExitExceptionalPoint;
  } catch (const std::exception& e) {
    err << "lambda-pt: " << e.what() << '\n';
    return kExitValidationFailure;
  }
}

}  // namespace lambda_pt::cli

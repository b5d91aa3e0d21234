#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ncwishart/cli.hpp"

namespace cli = ncwishart::cli;

int main(int argc, char** argv) {
  CLI::App app{"Non-central Wishart laws and Wishart processes"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string grid;
  std::string format = "csv";
  std::string mode;

  const char* descriptions[][2] = {
      {"validate", "existence verdict for a parameter document"},
      {"laplace", "evaluate the Laplace transform on a PSD grid"},
      {"sample", "draw samples"},
      {"simulate", "Euler path of a Wishart process"},
      {"verify", "Monte Carlo and identity verification report"},
      {"convert", "convert between parameterizations"},
      {"riccati", "closed-form vs RK4 characteristic exponents"},
  };
  for (const auto& [name, help] : descriptions) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input,-i", config.input, "input JSON document")->required();
    sub->add_option("--output,-o", config.output, "output path (default stdout)");
    sub->add_option("--seed", config.seed, "random seed; 0 draws one from entropy");
    sub->add_option("--n", config.n, "sample count");
    sub->add_option("--steps", config.steps, "integration / Euler steps");
    sub->add_option("--t", config.t, "time horizon");
    sub->add_option("--grid", grid, "transform grid COUNT:S1,S2,...");
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--allow-open", config.allow_open,
                  "proceed on open-problem parameters where possible");
    sub->add_option("--mode", mode, "process mode override")
        ->check(CLI::IsMember({"strict", "formal"}));
    sub->add_option("--to", config.to, "convert target: gamma or letac")
        ->check(CLI::IsMember({"gamma", "letac"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInvalidInput;
  }

  config.command = *cli::parse_command(app.get_subcommands().front()->get_name());
  config.format = format == "json" ? cli::Format::Json : cli::Format::Csv;
  if (!mode.empty()) {
    config.mode = mode == "formal" ? ncwishart::ProcessMode::Formal
                                   : ncwishart::ProcessMode::Strict;
  }
  if (!grid.empty()) {
    try {
      config.grid = cli::GridSpec::parse(grid);
    } catch (const std::exception& e) {
      std::cerr << "invalid input: " << e.what() << "\n";
      return cli::kInvalidInput;
    }
  }
  return cli::run(config, std::cerr);
}

// thz-ris-planner: link budget, aperture sizing, patterns, beam squint and
// control power for THz reconfigurable intelligent surfaces.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thzris/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"THz RIS planning tool"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  thzris::cli::Options options;

  app.add_option("--config", config_path, "scenario file (INI with unit suffixes)")->required();
  app.add_option("--out", out_dir, "directory for CSV/SVG output files");
  app.add_option("--format", format, "summary format on stdout")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--svg", options.svg, "also write SVG plots (needs --out)");
  app.add_option("--threads", options.threads, "worker threads (0 = hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--export-profiles", options.export_profiles, "pattern: write per-element phase profiles");

  for (const auto& [name, _] : thzris::cli::commands()) {
    static const std::map<std::string, std::string> help = {
        {"link-budget", "received power, sensitivity and margin"},
        {"solve-aperture", "minimum aperture and element count closing the link"},
        {"pattern", "directivity and principal cut per quantization setting"},
        {"squint", "gain vs frequency and 3 dB bandwidth at the steered angle"},
        {"power", "panel control power per technology profile"}};
    app.add_subcommand(name, help.at(name));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return thzris::cli::exit_usage;
  }

  options.format = format == "json" ? thzris::cli::OutputFormat::Json : thzris::cli::OutputFormat::Csv;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (options.svg && !options.out_dir) {
    std::cerr << "error: --svg needs --out\n";
    return thzris::cli::exit_usage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return thzris::cli::run_file(command, config_path, options, std::cout, std::cerr);
}

#include "realclock/cli/app.hpp"

#include <filesystem>
#include <optional>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "realclock/cli/commands.hpp"
#include "realclock/cli/config.hpp"

namespace realclock::cli {

int exit_code_for(std::exception_ptr error) noexcept {
  try {
    std::rethrow_exception(error);
  } catch (const SweepError& e) {
    return e.exit_code();
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const IoError&) {
    return kExitIo;
  } catch (const Error&) {
    // Library errors raised while computing: integration failure, grid and
    // convergence problems, resource limits.
    return kExitNumeric;
  } catch (const std::bad_alloc&) {
    return kExitNumeric;
  } catch (...) {
    return kExitNumeric;
  }
}

namespace {

void write_output(const std::filesystem::path& path, const Report& report, Format format) {
  std::ostringstream buf;
  write_report(buf, report, format);
  const std::string text = buf.str();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open output file '" + path.string() + "'");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) {
    throw IoError("failed writing output file '" + path.string() + "'");
  }
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"Quantum evolution against real clocks", "realclock-qm"};
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string format_text;
  std::uint64_t seed = 0;

  app.add_option("command", command, "evolve | zurek | condprob | clock-limits | sweep")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--set", overrides, "override a setting, key=value with a dotted key");
  app.add_option("--out", out_path, "output file")->required();
  auto* format_opt = app.add_option("--format", format_text, "csv or json");
  auto* seed_opt = app.add_option("--seed", seed, "root random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "realclock-qm: " << e.what() << '\n' << app.help();
    return kExitConfig;
  }

  std::optional<RunConfig> cfg;
  Format format = Format::csv;
  try {
    const Command cmd = parse_command(command);
    nlohmann::json doc = read_config_file(config_path);
    for (const auto& o : overrides) {
      apply_override(doc, o);
    }
    if (*seed_opt) {
      set_path(doc, "seed", seed);
    }
    if (*format_opt) {
      set_path(doc, "output.format", format_text);
    }
    cfg.emplace(load_config(doc, cmd));
    format = parse_format(cfg->resolved["output"]["format"].get<std::string>());
  } catch (const IoError& e) {
    err << "realclock-qm: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "realclock-qm: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const Report report = run_command(*cfg, workers_from_env());
    write_output(out_path, report, format);
  } catch (const std::exception& e) {
    err << "realclock-qm: " << e.what() << '\n';
    return exit_code_for(std::current_exception());
  }
  return kExitOk;
}

}  // namespace realclock::cli

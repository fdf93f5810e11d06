#pragma once

// Run configuration: a JSON document plus --set overrides, checked against
// the schema in schema/config.schema.json. Loading fills in every default,
// rejects unknown keys by their dotted path, and builds the physical objects
// so state invariants fail before any computation starts.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "realclock/clock.hpp"
#include "realclock/core.hpp"
#include "realclock/evolution.hpp"
#include "realclock/free_particle_clock.hpp"
#include "realclock/zurek.hpp"

namespace realclock::cli {

/// Invalid or malformed configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable input or unwritable output (exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

enum class Command { evolve, zurek, condprob, clock_limits, sweep };

Command parse_command(std::string_view name);
std::string_view command_name(Command c) noexcept;

struct ZurekSettings {
  zurek::SpinBath bath;
  double t_planck;
  double t_final;
  std::size_t samples;
  bool brute_force;
  bool recurrence;
  double horizon;
  std::size_t recurrence_samples;
  double threshold;
};

enum class CondprobSource { analytic, wavepacket };

struct CondprobSettings {
  CondprobSource source;
  HermitianOperator observable;
  double o_center;
  double o_halfwidth;
  double reading_min;
  double reading_max;
  std::size_t readings;
  FreeParticleClock wavepacket;
};

struct LimitSettings {
  double omega;
  double t;
  double t_planck;
  double mass;
};

struct SweepSettings {
  Command command;
  std::string key;
  double min;
  double max;
  std::size_t n;
};

struct RunConfig {
  Command command;
  nlohmann::json resolved;  ///< every key with defaults filled in
  std::uint64_t seed;
  HermitianOperator hamiltonian;
  DensityMatrix state;
  ClockModel clock;
  EvolutionConfig evolution;
  double t_final;
  ZurekSettings zurek;
  CondprobSettings condprob;
  LimitSettings limits;
  SweepSettings sweep;
};

nlohmann::json read_config_file(const std::filesystem::path& path);

/// Applies "a.b.c=value"; the value is parsed as JSON when possible, else kept as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Validates the document and builds the typed configuration.
RunConfig load_config(const nlohmann::json& doc, Command command);

/// Value at a dotted path, or nullptr when absent.
const nlohmann::json* find_path(const nlohmann::json& doc, std::string_view dotted);
void set_path(nlohmann::json& doc, std::string_view dotted, nlohmann::json value);

}  // namespace realclock::cli

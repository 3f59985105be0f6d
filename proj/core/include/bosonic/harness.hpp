#pragma once

#include "bosonic/serialization.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bosonic {

const char* version();

/// Everything that influences a command's numbers; embedded in reports.
struct RunConfig {
  std::uint64_t seed = 20190417;
  Tolerances tol{};
  double fock_tol = 1e-3;
  int cutoff = 15;
  std::optional<double> grid_radius;  // defaults depend on the mode count
  std::optional<double> grid_step;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.02, 0.01};
  int sample_points = 1000;  // fixed xi sample for sup errors
  double sample_radius = 4.0;
  int witness_points = 12;
  bool timing = false;  // runtime_ms stays 0 unless set, keeping output reproducible

  Sampler sampler() const;
  QuadratureGrid grid(int modes = 1) const;
  ChannelOptions channel_options() const;
  Json to_json() const;
};

struct StateSpec {
  enum class Kind { vacuum, coherent, thermal };
  Kind kind = Kind::vacuum;
  std::vector<double> values;  // coherent amplitudes or thermal covariance scale

  /// "vacuum", "coherent:0.5", "coherent:0.3,-0.1", "thermal:3".
  static StateSpec parse(const std::string& text);
  std::string describe() const;
  /// A scalar coherent amplitude l means s = (l, 0) on every mode.
  CharFn char_fn(int n) const;
};

struct CommandResult {
  int exit_code = 0;  // 0 pass, 1 mathematical failure, 2 input error
  Json report;
  std::string text;  // CSV or narrative, when the command produces one
};

/// Runs `body`, mapping input problems to exit 2 and failed mathematical
/// checks or guards to exit 1. The report then carries the error message.
CommandResult guarded(const std::string& command, const RunConfig& config,
                      const std::function<CommandResult()>& body);

/// Sampled point set of the char_sup_error metric.
std::vector<PhasePoint> sup_sample(const RunConfig& config, int dim);

double char_sup_error(const CharFn& a, const CharFn& b, const std::vector<PhasePoint>& sample);

CommandResult cmd_verify(const Json& channel_spec, const RunConfig& config);

CommandResult cmd_dilate(const Json& channel_spec, const std::string& algorithm, double epsilon,
                         const RunConfig& config);

CommandResult cmd_simulate(const Json& document, const StateSpec& state, const RunConfig& config,
                           bool dump_state = false);

struct SweepRow {
  double epsilon = 0.0;
  std::string algorithm;
  double char_sup_error = 0.0;
  std::optional<double> trace_distance;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// One row per epsilon in config order. algorithm is var-unitary,
/// fixed-unitary or bk; the bk mode ignores the channel spec and sweeps the
/// noise strength of the bk preset over config.epsilons.
CommandResult cmd_sweep(const Json& channel_spec, const std::string& algorithm,
                        const StateSpec& state, const RunConfig& config, bool with_fock = false);

std::vector<SweepRow> sweep_rows(const Json& report);

CommandResult cmd_witness(const RealVector& s, const RunConfig& config);

}  // namespace bosonic

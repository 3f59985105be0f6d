// Command-line front end: verify, dilate, simulate, sweep, witness.
#include "bosonic/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using bosonic::CommandResult;
using bosonic::Json;

constexpr int kInputError = 2;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bosonic::ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw bosonic::ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

// Prints the result and returns the process exit code. `artifact` is what
// --out receives; without --out it goes to stdout.
int emit(const CommandResult& r, bool json, const std::string& out_path, const std::string& artifact) {
  const std::string report = r.report.dump(2) + "\n";
  if (!out_path.empty()) {
    if (!write_file(out_path, artifact.empty() ? report : artifact)) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kInputError;
    }
  }
  if (json) {
    std::cout << report;
  } else if (out_path.empty() && !artifact.empty()) {
    std::cout << artifact;
  } else if (!r.text.empty()) {
    std::cout << r.text;
  } else if (r.exit_code == 0 || !r.report.contains("error")) {
    std::cout << report;
  }
  if (r.exit_code != 0 && r.report.contains("error")) {
    std::cerr << "error: " << r.report["error"]["message"].get<std::string>() << "\n";
  }
  return r.exit_code;
}

CommandResult input_error(const std::string& command, const bosonic::RunConfig& config,
                          const std::string& message) {
  return bosonic::guarded(command, config, [&]() -> CommandResult { throw bosonic::ParseError(message); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear bosonic channels: positivity certificates, Gaussian dilations, Fock simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(bosonic::version()));

  bosonic::RunConfig config;
  double grid_radius = 0.0;
  double grid_step = 0.0;
  bool json = false;
  std::string out_path;
  app.add_option("--seed", config.seed, "Seed for every sampled point set")->capture_default_str();
  app.add_option("--tol", config.tol.structural, "Tolerance for structural identities")->capture_default_str();
  app.add_option("--eig-tol", config.tol.eigen, "Tolerance for eigenvalue nonnegativity")->capture_default_str();
  app.add_option("--cutoff", config.cutoff, "Photon cutoff per mode")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--grid-radius", grid_radius, "Quadrature half-width R")->check(CLI::PositiveNumber);
  app.add_option("--grid-step", grid_step, "Quadrature step h")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Write the command's artifact to this file");
  app.add_flag("--json", json, "Print the full JSON report");
  app.add_flag("--timing", config.timing, "Record wall-clock runtime in sweep rows");

  std::string spec_path;
  std::string algorithm = "exact";
  double epsilon = 0.1;
  std::string state = "vacuum";
  bool dump_state = false;
  bool with_fock = false;
  std::vector<double> epsilons;
  std::vector<double> s_vec;

  auto* verify = app.add_subcommand("verify", "Check normalization and complete positivity of a channel");
  verify->add_option("spec", spec_path, "Channel spec JSON")->required();

  auto* dilate = app.add_subcommand("dilate", "Synthesize a Gaussian dilation");
  dilate->add_option("spec", spec_path, "Channel spec JSON")->required();
  dilate->add_option("--algorithm", algorithm, "exact | var-unitary | fixed-unitary")
      ->check(CLI::IsMember({"exact", "var-unitary", "fixed-unitary"}))
      ->capture_default_str();
  dilate->add_option("--epsilon", epsilon, "Approximation parameter")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Run a channel or dilation on a state");
  simulate->add_option("spec", spec_path, "Channel spec or dilation JSON")->required();
  simulate->add_option("--state", state, "vacuum | coherent:<l>[,...] | thermal:<v>")->capture_default_str();
  simulate->add_flag("--dump-state", dump_state, "Include output density matrices in the report");

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over epsilon, CSV output");
  sweep->add_option("spec", spec_path, "Channel spec JSON (ignored for --algorithm bk)");
  sweep->add_option("--algorithm", algorithm, "var-unitary | fixed-unitary | bk")
      ->check(CLI::IsMember({"var-unitary", "fixed-unitary", "bk"}))
      ->required();
  sweep->add_option("--epsilons", epsilons, "Epsilon (or sigma) values")->delimiter(',');
  sweep->add_option("--state", state, "Input state")->capture_default_str();
  sweep->add_flag("--fock", with_fock, "Also report Fock-level trace distances");

  auto* witness = app.add_subcommand("witness", "Numerical no-go report for the binary displacement channel");
  witness->add_option("--s", s_vec, "Displacement vector s")->delimiter(',')->required();
  witness->add_option("--epsilons", epsilons, "Epsilon values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (grid_radius > 0.0) config.grid_radius = grid_radius;
  if (grid_step > 0.0) config.grid_step = grid_step;
  if (!epsilons.empty()) config.epsilons = epsilons;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    config.grid(1);
  } catch (const bosonic::Error& e) {
    return emit(input_error(command, config, e.what()), json, "", "");
  }

  auto load = [&](const std::string& path) { return read_json(path); };

  if (verify->parsed()) {
    CommandResult r;
    try {
      r = bosonic::cmd_verify(load(spec_path), config);
    } catch (const bosonic::ParseError& e) {
      r = input_error(command, config, e.what());
    }
    return emit(r, json, out_path, "");
  }
  if (dilate->parsed()) {
    CommandResult r;
    try {
      r = bosonic::cmd_dilate(load(spec_path), algorithm, epsilon, config);
    } catch (const bosonic::ParseError& e) {
      r = input_error(command, config, e.what());
    }
    const std::string artifact =
        r.exit_code == 0 || r.report.contains("dilation") ? (r.report.contains("dilation") ? r.report["dilation"].dump(2) + "\n" : "") : "";
    if (!out_path.empty() && !artifact.empty()) {
      if (!write_file(out_path, artifact)) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kInputError;
      }
    }
    return emit(r, json, "", "");
  }
  if (simulate->parsed()) {
    CommandResult r;
    try {
      r = bosonic::cmd_simulate(load(spec_path), bosonic::StateSpec::parse(state), config, dump_state);
    } catch (const bosonic::ParseError& e) {
      r = input_error(command, config, e.what());
    }
    return emit(r, json, out_path, "");
  }
  if (sweep->parsed()) {
    CommandResult r;
    try {
      const Json spec = algorithm == "bk" && spec_path.empty() ? Json::object() : load(spec_path);
      r = bosonic::cmd_sweep(spec, algorithm, bosonic::StateSpec::parse(state), config, with_fock);
    } catch (const bosonic::ParseError& e) {
      r = input_error(command, config, e.what());
    }
    return emit(r, json, out_path, r.exit_code == 0 ? r.text : "");
  }
  if (witness->parsed()) {
    if (epsilons.empty()) config.epsilons = {0.1};
    Eigen::Map<const bosonic::RealVector> s(s_vec.data(), static_cast<Eigen::Index>(s_vec.size()));
    return emit(bosonic::cmd_witness(s, config), json, out_path, "");
  }
  return kInputError;
}

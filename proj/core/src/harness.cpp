#include "bosonic/harness.hpp"

#include "bosonic/phase_space.hpp"
#include "bosonic/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#ifndef BOSONIC_VERSION
#define BOSONIC_VERSION "unknown"
#endif

namespace bosonic {

const char* version() { return BOSONIC_VERSION; }

Sampler RunConfig::sampler() const {
  Sampler s;
  s.seed = seed;
  return s;
}

QuadratureGrid RunConfig::grid(int modes) const {
  QuadratureGrid g = QuadratureGrid::defaults(modes);
  if (grid_radius) g.radius = *grid_radius;
  if (grid_step) g.step = *grid_step;
  g.validate();
  return g;
}

ChannelOptions RunConfig::channel_options() const {
  ChannelOptions o;
  o.sampler = sampler();
  o.eig_tol = tol.eigen;
  return o;
}

Json RunConfig::to_json() const {
  // Raw values so that an invalid grid can still be reported.
  QuadratureGrid g = QuadratureGrid::defaults(1);
  if (grid_radius) g.radius = *grid_radius;
  if (grid_step) g.step = *grid_step;
  return Json{{"seed", seed},
              {"tolerances",
               {{"structural", tol.structural},
                {"eigen", tol.eigen},
                {"rank", tol.rank},
                {"conditioning", tol.conditioning},
                {"fock", fock_tol}}},
              {"cutoff", cutoff},
              {"grid", {{"radius", g.radius}, {"step", g.step}}},
              {"epsilons", epsilons},
              {"sample_points", sample_points},
              {"sample_radius", sample_radius},
              {"witness_points", witness_points},
              {"timing", timing}};
}

StateSpec StateSpec::parse(const std::string& text) {
  StateSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "vacuum") {
    spec.kind = Kind::vacuum;
    if (colon != std::string::npos) throw ParseError("state: vacuum takes no parameters");
    return spec;
  }
  if (kind == "coherent") {
    spec.kind = Kind::coherent;
  } else if (kind == "thermal") {
    spec.kind = Kind::thermal;
  } else {
    throw ParseError("state: unknown kind '" + kind + "' (vacuum, coherent:<l>, thermal:<v>)");
  }
  if (colon == std::string::npos) throw ParseError("state: '" + kind + "' needs a value");
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    try {
      std::size_t used = 0;
      spec.values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("state: cannot parse '" + item + "' as a number");
    }
  }
  if (spec.values.empty()) throw ParseError("state: missing values");
  if (spec.kind == Kind::thermal && (spec.values.size() != 1 || spec.values[0] < 1.0)) {
    throw ParseError("state: thermal takes one covariance scale >= 1");
  }
  return spec;
}

std::string StateSpec::describe() const {
  std::ostringstream out;
  out << (kind == Kind::vacuum ? "vacuum" : kind == Kind::coherent ? "coherent" : "thermal");
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ',' : ':') << values[i];
  return out.str();
}

CharFn StateSpec::char_fn(int n) const {
  const RealMatrix I = RealMatrix::Identity(2 * n, 2 * n);
  switch (kind) {
    case Kind::vacuum: return CharFn::vacuum(n);
    case Kind::thermal: return CharFn::gaussian_state(values[0] * I);
    case Kind::coherent: {
      RealVector s = RealVector::Zero(2 * n);
      if (values.size() == 1) {
        for (int j = 0; j < n; ++j) s(2 * j) = values[0];
      } else if (static_cast<int>(values.size()) == 2 * n) {
        for (int j = 0; j < 2 * n; ++j) s(j) = values[static_cast<std::size_t>(j)];
      } else {
        throw ParseError("state: coherent needs 1 or 2n values");
      }
      return CharFn::coherent(s);
    }
  }
  return CharFn::vacuum(n);
}

CommandResult guarded(const std::string& command, const RunConfig& config,
                      const std::function<CommandResult()>& body) {
  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    CommandResult r;
    r.exit_code = code;
    r.report = Json{{"command", command},
                    {"version", version()},
                    {"config", config.to_json()},
                    {"verdict", code == 2 ? "input_error" : "fail"},
                    {"error", {{"type", kind}, {"message", message}}}};
    return r;
  };
  try {
    CommandResult r = body();
    r.report["command"] = command;
    r.report["version"] = version();
    r.report["config"] = config.to_json();
    return r;
  } catch (const ParseError& e) {
    return fail(2, "ParseError", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(2, "ParseError", e.what());
  } catch (const DimensionMismatch& e) {
    return fail(2, "DimensionMismatch", e.what());
  } catch (const InvalidArgument& e) {
    return fail(2, "InvalidArgument", e.what());
  } catch (const NotCP& e) {
    CommandResult r = fail(1, "NotCP", e.what());
    if (e.certificate()) r.report["certificate"] = to_json(*e.certificate());
    if (e.exact_min_eig()) r.report["exact_min_eig"] = *e.exact_min_eig();
    return r;
  } catch (const SingularJ& e) {
    return fail(1, "SingularJ", e.what());
  } catch (const Error& e) {
    return fail(1, "Error", e.what());
  } catch (const std::exception& e) {
    return fail(1, "InternalError", e.what());
  }
}

std::vector<PhasePoint> sup_sample(const RunConfig& config, int dim) {
  Rng rng(splitmix64(config.seed));
  std::vector<PhasePoint> pts;
  pts.reserve(static_cast<std::size_t>(config.sample_points));
  for (int i = 0; i < config.sample_points; ++i) pts.push_back(rng.in_ball(dim, config.sample_radius));
  return pts;
}

double char_sup_error(const CharFn& a, const CharFn& b, const std::vector<PhasePoint>& sample) {
  double worst = 0.0;
  for (const PhasePoint& xi : sample) worst = std::max(worst, std::abs(a(xi) - b(xi)));
  return worst;
}

CommandResult cmd_verify(const Json& channel_spec, const RunConfig& config) {
  return guarded("verify", config, [&] {
    const LinearBosonicChannel ch = channel_from_json_unchecked(channel_spec);
    const ChannelOptions opt = config.channel_options();
    CommandResult r;
    Json checks;

    const double at_zero = std::abs(ch.f(PhasePoint::Zero(2 * ch.n)) - 1.0);
    checks["normalized"] = {{"pass", at_zero <= opt.normalization_tol}, {"deviation", at_zero}};

    Sampler none = opt.sampler;
    none.sets = 0;
    const BochnerReport probe = bochner_check(ch.f, none);
    checks["continuity"] = {{"pass", probe.continuous},
                            {"deviation", probe.continuity_deviation},
                            {"radius", BochnerOptions{}.probe_radius}};

    const PositivityCertificate cert = check_a_positive(ch.f, j_of_x(ch.X), opt.sampler, opt.eig_tol);
    checks["cp_certificate"] = to_json(cert);

    bool pass = at_zero <= opt.normalization_tol && probe.continuous && cert.pass;
    if (const auto* g = std::get_if<node::GaussianKernel>(&ch.f.node())) {
      const ExactGaussianCheck exact = gaussian_a_positive_exact(g->M, j_of_x(ch.X), opt.eig_tol);
      checks["exact_gaussian"] = {{"pass", exact.pass}, {"min_eig", exact.min_eig}};
      pass = pass && exact.pass;
    }
    r.report = Json{{"channel", to_json(ch)}, {"checks", checks}, {"verdict", pass ? "pass" : "fail"}};
    r.exit_code = pass ? 0 : 1;
    std::ostringstream text;
    text << "verify: " << (pass ? "PASS" : "FAIL") << " (J(X)-positivity min eig " << cert.min_eig
         << " over " << cert.sampler.sets << " point sets)\n";
    r.text = text.str();
    return r;
  });
}

namespace {

GaussianDilation build_dilation(const LinearBosonicChannel& ch, const std::string& algorithm,
                                double epsilon, const RunConfig& config) {
  DilationOptions opt;
  opt.tol = config.tol;
  switch (dilation_algorithm_from_string(algorithm)) {
    case DilationAlgorithm::exact: return exact_dilation(ch, opt);
    case DilationAlgorithm::var_unitary: return approx_var_unitary(ch, epsilon, opt);
    case DilationAlgorithm::fixed_unitary: return approx_fixed_unitary(ch, epsilon, opt);
    case DilationAlgorithm::manual: break;
  }
  throw InvalidArgument("algorithm must be exact, var-unitary or fixed-unitary");
}

Json report_json(const DilationReport& rep) {
  return Json{{"xy_residual", rep.xy_residual},
              {"symplectic_residual", rep.symplectic_residual},
              {"columns_match", rep.columns_match},
              {"ancilla_bochner",
               {{"normalized", rep.ancilla.normalized},
                {"continuous", rep.ancilla.continuous},
                {"certificate", to_json(rep.ancilla.positivity)}}},
              {"penrose_residual", rep.penrose_residual},
              {"sandwich_residual", rep.sandwich_residual},
              {"wg_min_eig", rep.wg_min_eig},
              {"min_nonzero_pair", rep.min_nonzero_pair},
              {"failures", rep.failures},
              {"warnings", rep.warnings}};
}

Json state_summary(const FockOperator& rho, const FockOperator* reference) {
  Json j{{"trace", rho.trace().real()}, {"purity", purity(rho)}, {"min_eig", min_eigenvalue(rho)}};
  if (reference) j["trace_distance_to_input"] = trace_distance(rho, *reference);
  return j;
}

}  // namespace

CommandResult cmd_dilate(const Json& channel_spec, const std::string& algorithm, double epsilon,
                         const RunConfig& config) {
  return guarded("dilate", config, [&] {
    const LinearBosonicChannel ch = channel_from_json(channel_spec, config.channel_options());
    const GaussianDilation d = build_dilation(ch, algorithm, epsilon, config);
    const DilationReport rep = check_dilation(d, config.sampler(), config.tol);
    CommandResult r;
    r.exit_code = rep.pass() ? 0 : 1;
    r.report = Json{{"algorithm", to_string(d.provenance.algorithm)},
                    {"epsilon", epsilon},
                    {"checks", report_json(rep)},
                    {"verdict", rep.pass() ? "pass" : "fail"},
                    {"dilation", to_json(d)}};
    std::ostringstream text;
    text << "dilate: " << to_string(d.provenance.algorithm) << ", n = " << d.n << ", m = " << d.m
         << ", XY residual " << rep.xy_residual << ", " << (rep.pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& w : rep.warnings) text << "warning: " << w << "\n";
    for (const auto& f : rep.failures) text << "failure: " << f << "\n";
    r.text = text.str();
    return r;
  });
}

CommandResult cmd_simulate(const Json& document, const StateSpec& state, const RunConfig& config,
                           bool dump_state) {
  return guarded("simulate", config, [&] {
    const bool is_dilation = document.is_object() && document.contains("ancilla");
    std::optional<GaussianDilation> dil;
    std::optional<LinearBosonicChannel> ch;
    int n = 0;
    if (is_dilation) {
      dil = dilation_from_json(document);
      n = dil->n;
    } else {
      ch = channel_from_json(document, config.channel_options());
      n = ch->n;
    }
    const CharFn chi_in = state.char_fn(n);
    const CharFn chi_out = is_dilation ? apply_dilation_char(*dil, chi_in) : apply_to_char(*ch, chi_in);
    const QuadratureGrid grid = config.grid(1);

    const FockOperator rho_in = operator_from_char(chi_in, grid, config.cutoff);
    const FockOperator rho_out = operator_from_char(chi_out, grid, config.cutoff);

    // Char-level output at a few points, with the reconstructed operator's
    // characteristic function alongside as a round-trip check.
    Json samples = Json::array();
    double roundtrip = 0.0;
    Rng rng(splitmix64(config.seed + 1));
    for (int i = 0; i < 8; ++i) {
      const PhasePoint xi = i == 0 ? PhasePoint::Zero(2 * n) : rng.in_ball(2 * n, 2.0);
      const cplx v = chi_out(xi);
      roundtrip = std::max(roundtrip, std::abs(char_of_operator(rho_out, xi) - v));
      samples.push_back(Json{{"xi", vector_to_json(xi)}, {"re", v.real()}, {"im", v.imag()}});
    }

    CommandResult r;
    r.report = Json{{"state", state.describe()},
                    {"kind", is_dilation ? "dilation" : "channel"},
                    {"char_samples", samples},
                    {"char_roundtrip_error", roundtrip},
                    {"output", state_summary(rho_out, &rho_in)}};
    bool pass = std::abs(rho_out.trace().real() - 1.0) <= 0.05;
    if (is_dilation) {
      StinespringOptions so;
      so.cutoff = config.cutoff;
      so.grid = grid;
      const StinespringResult st = stinespring_apply(*dil, rho_in, so);
      double char_gap = 0.0;
      Rng probe(splitmix64(config.seed + 2));
      for (int i = 0; i < 50; ++i) {
        const PhasePoint xi = probe.in_ball(2 * n, 2.0);
        char_gap = std::max(char_gap, std::abs(char_of_operator(st.output, xi) - chi_out(xi)));
      }
      const double td = trace_distance(st.output, rho_out);
      r.report["stinespring"] = Json{{"output", state_summary(st.output, &rho_in)},
                                     {"ancilla_captured_trace", st.ancilla_captured_trace},
                                     {"output_trace", st.output_trace},
                                     {"unitarity_defect", st.unitarity_defect},
                                     {"terms", st.terms},
                                     {"char_discrepancy", char_gap},
                                     {"trace_distance_to_char_level", td}};
      pass = pass && std::abs(st.output_trace - 1.0) <= 0.05;
      if (dump_state) r.report["stinespring_state"] = to_json(st.output);
    }
    if (dump_state) r.report["output_state"] = to_json(rho_out);
    r.report["verdict"] = pass ? "pass" : "fail";
    r.exit_code = pass ? 0 : 1;
    std::ostringstream text;
    text << "simulate: " << state.describe() << " through " << (is_dilation ? "dilation" : "channel")
         << ", output trace " << rho_out.trace().real() << ", trace distance to input "
         << r.report["output"]["trace_distance_to_input"].get<double>() << "\n";
    if (is_dilation) {
      text << "stinespring: trace " << r.report["stinespring"]["output_trace"].get<double>()
           << ", char discrepancy " << r.report["stinespring"]["char_discrepancy"].get<double>()
           << "\n";
    }
    r.text = text.str();
    return r;
  });
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "epsilon,algorithm,char_sup_error,trace_distance,runtime_ms,seed\n";
  char buf[256];
  for (const SweepRow& row : rows) {
    std::string td;
    if (row.trace_distance) {
      std::snprintf(buf, sizeof buf, "%.12g", *row.trace_distance);
      td = buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%s,%.3f,%llu\n", row.epsilon, row.algorithm.c_str(),
                  row.char_sup_error, td.c_str(), row.runtime_ms,
                  static_cast<unsigned long long>(row.seed));
    out += buf;
  }
  return out;
}

CommandResult cmd_sweep(const Json& channel_spec, const std::string& algorithm,
                        const StateSpec& state, const RunConfig& config, bool with_fock) {
  return guarded("sweep", config, [&] {
    const bool bk = algorithm == "bk";
    if (!bk) dilation_algorithm_from_string(algorithm);  // validates the name
    if (!bk && algorithm == "exact") throw InvalidArgument("sweep: exact has no epsilon to sweep");
    const int n = bk ? (channel_spec.is_object() && channel_spec.contains("n")
                            ? channel_spec.at("n").get<int>()
                            : 1)
                     : channel_from_json_unchecked(channel_spec).n;
    std::optional<LinearBosonicChannel> ch;
    if (!bk) ch = channel_from_json(channel_spec, config.channel_options());
    const CharFn chi_in = state.char_fn(n);
    const std::vector<PhasePoint> sample = sup_sample(config, 2 * n);
    const QuadratureGrid grid = config.grid(1);
    std::optional<FockOperator> rho_in;
    if (with_fock) rho_in = operator_from_char(chi_in, grid, config.cutoff);

    std::vector<SweepRow> rows(config.epsilons.size());
    for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
      const auto start = std::chrono::steady_clock::now();
      const double eps = config.epsilons[i];
      SweepRow& row = rows[i];
      row.epsilon = eps;
      row.algorithm = algorithm;
      row.seed = config.seed;
      CharFn approx = chi_in;
      CharFn exact = chi_in;
      if (bk) {
        approx = apply_to_char(bk_noise_channel(eps, n, config.channel_options()), chi_in);
      } else {
        approx = apply_dilation_char(build_dilation(*ch, algorithm, eps, config), chi_in);
        exact = apply_to_char(*ch, chi_in);
      }
      row.char_sup_error = char_sup_error(approx, exact, sample);
      if (with_fock) {
        const FockOperator a = operator_from_char(approx, grid, config.cutoff);
        const FockOperator e = bk ? *rho_in : operator_from_char(exact, grid, config.cutoff);
        row.trace_distance = trace_distance(a, e);
      }
      if (config.timing) {
        row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
    }
    CommandResult r;
    Json jrows = Json::array();
    for (const SweepRow& row : rows) {
      Json jr{{"epsilon", row.epsilon},
              {"algorithm", row.algorithm},
              {"char_sup_error", row.char_sup_error},
              {"trace_distance", row.trace_distance ? Json(*row.trace_distance) : Json(nullptr)},
              {"runtime_ms", row.runtime_ms},
              {"seed", row.seed}};
      jrows.push_back(std::move(jr));
    }
    r.report = Json{{"algorithm", algorithm}, {"state", state.describe()}, {"rows", jrows}, {"verdict", "pass"}};
    r.text = sweep_csv(rows);
    return r;
  });
}

std::vector<SweepRow> sweep_rows(const Json& report) {
  std::vector<SweepRow> rows;
  for (const Json& jr : report.at("rows")) {
    SweepRow row;
    row.epsilon = jr.at("epsilon").get<double>();
    row.algorithm = jr.at("algorithm").get<std::string>();
    row.char_sup_error = jr.at("char_sup_error").get<double>();
    if (!jr.at("trace_distance").is_null()) row.trace_distance = jr.at("trace_distance").get<double>();
    row.runtime_ms = jr.at("runtime_ms").get<double>();
    row.seed = jr.at("seed").get<std::uint64_t>();
    rows.push_back(row);
  }
  return rows;
}

CommandResult cmd_witness(const RealVector& s, const RunConfig& config) {
  return guarded("witness", config, [&] {
    if (s.size() == 0 || s.size() % 2 != 0) throw InvalidArgument("witness: s must have even length");
    if (s.isZero(0.0)) throw InvalidArgument("witness: s must be nonzero");
    const int n = static_cast<int>(s.size() / 2);
    const LinearBosonicChannel ch = binary_displacement(s, config.channel_options());
    std::ostringstream text;
    text << "Binary displacement channel with s = " << s.transpose() << "\n";

    Json exact;
    bool singular = false;
    try {
      exact_dilation(ch, DilationOptions{config.tol, 20});
      exact = Json{{"raised", false}};
    } catch (const SingularJ& e) {
      singular = true;
      exact = Json{{"raised", true}, {"error", "SingularJ"}, {"message", e.what()}};
    }
    text << "exact dilation: " << (singular ? "SingularJ raised, J(X) = 0" : "unexpectedly succeeded")
         << "\n";

    // Points where cos(s^T Omega xi) = 1 but xi != 0.
    Rng rng(splitmix64(config.seed + 3));
    std::vector<PhasePoint> points;
    while (static_cast<int>(points.size()) < config.witness_points) {
      const PhasePoint xi = rng.in_ball(2 * n, 1.0);
      const double w = symplectic_product(s, xi);
      if (std::abs(w) < 1e-3) continue;
      points.push_back((2.0 * std::numbers::pi / w) * xi);
    }

    const std::vector<double> eps_list =
        config.epsilons.empty() ? std::vector<double>{0.1} : config.epsilons;
    Json tables = Json::array();
    bool all_below = true;
    for (double eps : eps_list) {
      const GaussianDilation d = approx_var_unitary(ch, eps, DilationOptions{config.tol, 20});
      Json table = Json::array();
      double worst = 0.0;
      text << "\nvar-unitary dilation, eps = " << eps << "\n";
      text << "  |xi~|          cos(s^T Omega xi~)   |chi_sigma(Y xi~)|\n";
      for (const PhasePoint& xt : points) {
        const double c = std::cos(symplectic_product(s, xt));
        const double a = std::abs(d.ancilla(d.Y * xt));
        worst = std::max(worst, a);
        table.push_back(Json{{"xi", vector_to_json(xt)}, {"cos", c}, {"abs_chi_sigma", a}});
        char line[128];
        std::snprintf(line, sizeof line, "  %-14.6g %-20.15g %.6g\n", xt.norm(), c, a);
        text << line;
      }
      const bool below = worst <= 1.0 - 1e-3;
      all_below = all_below && below;
      tables.push_back(Json{{"epsilon", eps}, {"max_abs_chi_sigma", worst}, {"below_bound", below}, {"points", table}});
    }
    text << "\nEvery exact dilation would need |chi_sigma(Y xi~)| = 1 at these points; a state's\n"
            "characteristic function stays strictly below 1 away from the origin.\n";

    CommandResult r;
    const bool pass = singular && all_below;
    r.exit_code = pass ? 0 : 1;
    r.report = Json{{"s", vector_to_json(s)},
                    {"exact_dilation", exact},
                    {"var_unitary", tables},
                    {"verdict", pass ? "pass" : "fail"}};
    r.text = text.str();
    return r;
  });
}

}  // namespace bosonic

// Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is 0 when every criterion passes, 1 otherwise.
#include "bosonic/harness.hpp"
#include "bosonic/gaussian_unitary.hpp"
#include "bosonic/phase_space.hpp"
#include "bosonic/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace bosonic;

namespace {

constexpr std::uint64_t kSeed = 20190417;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects sub-check results; the first few failures end up in the detail line.
class Ledger {
 public:
  void check(bool ok, const std::string& what) {
    ++total_;
    if (!ok) {
      ++failed_;
      if (failures_.size() < 4) failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_.push_back(s); }

  Outcome outcome() const {
    std::ostringstream out;
    out << (total_ - failed_) << "/" << total_ << " checks";
    for (const auto& n : notes_) out << "; " << n;
    for (const auto& f : failures_) out << "; FAILED " << f;
    return {failed_ == 0, out.str()};
  }

 private:
  int total_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RealVector vec(std::initializer_list<double> v) {
  RealVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

std::vector<PhasePoint> ball_sample(int dim, int count, double radius, std::uint64_t seed) {
  Rng rng(splitmix64(seed));
  std::vector<PhasePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(rng.in_ball(dim, radius));
  return pts;
}

RealMatrix det_one_block(Rng& rng) {
  // Any real 2x2 matrix with unit determinant is symplectic.
  RealMatrix B(2, 2);
  const double a = rng.uniform(0.5, 1.6);
  const double b = rng.uniform(-0.8, 0.8);
  const double c = rng.uniform(-0.8, 0.8);
  B << a, b, c, (1.0 + b * c) / a;
  return B;
}

RealMatrix block_diag(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out = RealMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

double largest_pair(const RealMatrix& J) {
  const SkewCanonicalForm f = skew_canonical(J);
  return f.d.size() ? f.d.maxCoeff() : 0.0;
}

// Seeded channel family covering invertible, singular and partially singular
// J(X), with Gaussian and non-Gaussian noise functions.
LinearBosonicChannel seeded_channel(int k) {
  Rng rng(splitmix64(kSeed + static_cast<std::uint64_t>(k)));
  const int n = 1 + k % 2;
  const int dim = 2 * n;
  const RealMatrix I = RealMatrix::Identity(dim, dim);
  switch ((k / 2) % 4) {
    case 0: {
      const RealMatrix X = rng.uniform_matrix(dim, dim, -1.5, 1.5);
      const double lift = largest_pair(j_of_x(X)) + rng.uniform(0.05, 0.5);
      return gaussian_channel(X, lift * I);
    }
    case 1: {
      RealMatrix X = det_one_block(rng);
      if (n == 2) {
        const double t = rng.uniform(0.1, 1.4);
        const RealMatrix bs =
            symplectic_complete(std::cos(t) * RealMatrix::Identity(2, 2), std::sin(t) * RealMatrix::Identity(2, 2)).S;
        X = bs * block_diag(X, det_one_block(rng));
      }
      std::vector<RealVector> pts;
      for (int i = 0; i < 3; ++i) pts.push_back(rng.in_ball(dim, 1.5));
      const double w0 = rng.uniform(0.1, 0.5);
      const double w1 = rng.uniform(0.1, 0.4);
      return make_channel(X, CharFn::mixture({w0, w1, 1.0 - w0 - w1}, pts));
    }
    case 2: {
      if (n == 1) {
        const double c = rng.uniform(0.3, 0.95);
        const double t = rng.uniform(0.0, 3.0);
        RealMatrix R(2, 2);
        R << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
        return gaussian_channel(c * R, (1.0 - c * c + rng.uniform(0.0, 0.3)) * I);
      }
      // Symplectic on mode 0, amplifying on mode 1: one zero canonical pair.
      const double g = rng.uniform(1.2, 3.0);
      const RealMatrix X = block_diag(det_one_block(rng), std::sqrt(g) * RealMatrix::Identity(2, 2));
      RealMatrix N = RealMatrix::Zero(4, 4);
      N.bottomRightCorner(2, 2) = (g - 1.0 + rng.uniform(0.0, 0.3)) * RealMatrix::Identity(2, 2);
      RealVector s = RealVector::Zero(4);
      s.head(2) = rng.in_ball(2, 1.5);
      if (s.isZero()) s(0) = 1.0;
      return make_channel(X, CharFn::product({CharFn::gaussian_kernel(N), CharFn::cosine(s)}));
    }
    default: {
      RealVector s = rng.in_ball(dim, 2.0);
      if (s.isZero()) s(0) = 1.0;
      return binary_displacement(s);
    }
  }
}

// ---------------------------------------------------------------------------

Outcome criterion_structural() {
  Ledger led;
  const Tolerances tol{};
  const Sampler sampler{};
  int dilations = 0;
  int exact_skipped = 0;
  double worst = 0.0;
  double worst_wg = 0.0;
  for (int k = 0; k < 100; ++k) {
    const LinearBosonicChannel ch = seeded_channel(k);
    std::vector<GaussianDilation> ds;
    try {
      ds.push_back(exact_dilation(ch));
    } catch (const SingularJ&) {
      ++exact_skipped;
    }
    for (double eps : {0.2, 0.05}) {
      ds.push_back(approx_var_unitary(ch, eps));
      ds.push_back(approx_fixed_unitary(ch, eps));
    }
    for (const GaussianDilation& d : ds) {
      ++dilations;
      const DilationReport rep = check_dilation(d, sampler, tol);
      const std::string tag = "channel " + std::to_string(k) + " " + to_string(d.provenance.algorithm);
      led.check(rep.xy_residual <= 1e-9, tag + " XY residual " + fmt(rep.xy_residual));
      led.check(rep.symplectic_residual <= 1e-9, tag + " symplectic residual " + fmt(rep.symplectic_residual));
      led.check(rep.columns_match, tag + " completion columns");
      worst = std::max({worst, rep.xy_residual, rep.symplectic_residual});
      if (d.fixed) {
        led.check(rep.penrose_residual <= 1e-9, tag + " Penrose residual " + fmt(rep.penrose_residual));
        led.check(rep.sandwich_residual <= 1e-9, tag + " sandwich residual " + fmt(rep.sandwich_residual));
        led.check(rep.wg_min_eig >= -1e-10, tag + " W - i(Omega - P Omega P) min eig " + fmt(rep.wg_min_eig));
        worst = std::max({worst, rep.penrose_residual, rep.sandwich_residual});
        worst_wg = std::min(worst_wg, rep.wg_min_eig);
      }
    }
  }
  led.note(std::to_string(dilations) + " dilations (" + std::to_string(exact_skipped) +
           " channels with singular J skip the exact one)");
  led.note("max residual " + fmt(worst) + ", min Wg eig " + fmt(worst_wg));
  return led.outcome();
}

Outcome criterion_actions() {
  Ledger led;
  const auto sample = ball_sample(2, 1000, 4.0, kSeed);
  RealMatrix V(2, 2);
  V << 2.0, 0.3, 0.3, 1.2;
  const std::vector<CharFn> inputs{CharFn::coherent(vec({0.3, -0.2})), CharFn::gaussian_state(V, vec({0.1, 0.4}))};
  double worst = 0.0;
  auto compare = [&](const std::string& tag, const CharFn& got, const std::function<cplx(const PhasePoint&)>& want) {
    double gap = 0.0;
    for (const auto& xi : sample) gap = std::max(gap, std::abs(got(xi) - want(xi)));
    worst = std::max(worst, gap);
    led.check(gap <= 1e-12, tag + " gap " + fmt(gap));
  };

  // Exact dilations reproduce chi(X xi) f(xi).
  for (const auto& [name, ch] : {std::pair{"amplifier", amplifier(2.0)}, std::pair{"attenuator", attenuator(0.5)}}) {
    const GaussianDilation d = exact_dilation(ch);
    for (const CharFn& in : inputs) {
      compare(std::string("exact ") + name, apply_dilation_char(d, in),
              [&](const PhasePoint& xi) { return in(PhasePoint(ch.X * xi)) * ch.f(xi); });
    }
  }

  const std::vector<std::pair<std::string, LinearBosonicChannel>> channels{
      {"binary_displacement", binary_displacement(vec({1.0, 0.0}))},
      {"amplifier", amplifier(2.0)},
      {"attenuator", attenuator(0.5)},
      {"identity", identity_channel(1)},
      {"seeded", seeded_channel(0)}};
  const RealMatrix W = omega(1);
  for (const auto& [name, ch] : channels) {
    for (double eps : {0.2, 0.05}) {
      // Varying unitary: chi(X_e xi) f(xi) g_e(xi) with g_e = exp(-v |xi|^2 / 4).
      const GaussianDilation dv = approx_var_unitary(ch, eps);
      const double e = dv.provenance.epsilon_used;
      const RealMatrix Xe = (1.0 - e) * ch.X;
      const RealMatrix diff = Xe.transpose() * W * Xe - ch.X.transpose() * W * ch.X;
      const double v = Eigen::JacobiSVD<RealMatrix>(diff).singularValues()(0);
      // Fixed unitary: chi(X xi) f(xi) exp(-e/4 xi^T Q xi).
      const GaussianDilation df = approx_fixed_unitary(ch, eps);
      const RealMatrix Q = df.fixed->Q;
      for (const CharFn& in : inputs) {
        compare("var-unitary " + name, apply_dilation_char(dv, in), [&](const PhasePoint& xi) {
          return in(PhasePoint(Xe * xi)) * ch.f(xi) * std::exp(-0.25 * v * xi.squaredNorm());
        });
        compare("fixed-unitary " + name, apply_dilation_char(df, in), [&](const PhasePoint& xi) {
          return in(PhasePoint(ch.X * xi)) * ch.f(xi) * std::exp(-0.25 * eps * xi.dot(Q * xi));
        });
      }
    }
  }
  led.note("max gap " + fmt(worst) + " over 1000 points");
  return led.outcome();
}

Outcome criterion_convergence() {
  Ledger led;
  RunConfig cfg;
  const StateSpec state = StateSpec::parse("coherent:0.5,0.5");
  const std::vector<std::pair<std::string, Json>> specs{
      {"identity", Json{{"preset", "identity"}, {"n", 1}}},
      {"binary_displacement", Json{{"preset", "binary_displacement"}, {"s", {1.0, 0.0}}}},
      {"additive_noise", Json{{"preset", "additive_noise"}, {"N", {{0.5, 0.0}, {0.0, 0.5}}}}}};
  for (const auto& [name, spec] : specs) {
    for (const std::string algo : {"var-unitary", "fixed-unitary"}) {
      const CommandResult r = cmd_sweep(spec, algo, state, cfg);
      const std::string tag = name + " " + algo;
      led.check(r.exit_code == 0, tag + " sweep exit " + std::to_string(r.exit_code));
      if (r.exit_code != 0) continue;
      const auto rows = sweep_rows(r.report);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        led.check(rows[i].char_sup_error < rows[i - 1].char_sup_error,
                  tag + " not decreasing at eps " + fmt(rows[i].epsilon));
      }
      led.check(rows.back().char_sup_error <= 1e-2, tag + " error " + fmt(rows.back().char_sup_error) + " at eps 0.01");
      led.note(tag + " " + fmt(rows.front().char_sup_error) + " -> " + fmt(rows.back().char_sup_error));
    }
  }
  return led.outcome();
}

Outcome criterion_no_go() {
  Ledger led;
  RunConfig cfg;
  cfg.epsilons = {0.1};
  const CommandResult r = cmd_witness(vec({1.0, 0.0}), cfg);
  led.check(r.report.contains("exact_dilation") && r.report["exact_dilation"]["raised"].get<bool>() &&
                r.report["exact_dilation"]["error"] == "SingularJ",
            "exact construction did not raise SingularJ");
  int good = 0;
  double top = 0.0;
  if (r.report.contains("var_unitary")) {
    for (const Json& row : r.report["var_unitary"]) {
      if (std::abs(row["epsilon"].get<double>() - 0.1) > 1e-15) continue;
      for (const Json& p : row["points"]) {
        const double c = p["cos"].get<double>();
        const double a = p["abs_chi_sigma"].get<double>();
        top = std::max(top, a);
        if (std::abs(c - 1.0) <= 1e-12 && a <= 1.0 - 1e-3) ++good;
      }
    }
  }
  led.check(good >= 10, "only " + std::to_string(good) + " witness points");
  led.note(std::to_string(good) + " rescaled points, max |chi_sigma| " + fmt(top));
  return led.outcome();
}

Outcome criterion_positivity() {
  Ledger led;
  const Sampler sampler{};
  int compared = 0;
  int in_band = 0;
  int negatives = 0;
  for (int k = 0; k < 200; ++k) {
    Rng rng(splitmix64(kSeed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(k))));
    const int n = 1 + k % 2;
    const int dim = 2 * n;
    RealMatrix G(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) G(i, j) = rng.normal();
    const RealMatrix A = k % 4 < 2 ? omega(n) : j_of_x(rng.uniform_matrix(dim, dim, -1.5, 1.5));
    // A random PSD part plus an isotropic lift on either side of the threshold.
    const RealMatrix M = rng.uniform(0.05, 1.0) * (G.transpose() * G) / dim +
                         rng.uniform(0.0, 2.0) * largest_pair(A) * RealMatrix::Identity(dim, dim);
    const double exact = gaussian_a_positive_exact(M, A).min_eig;
    if (std::abs(exact) < 1e-6) {
      ++in_band;
      continue;
    }
    ++compared;
    if (exact < 0) ++negatives;
    const PositivityCertificate cert = check_a_positive(CharFn::gaussian_kernel(M), A, sampler);
    led.check(cert.pass == (exact >= 0), "case " + std::to_string(k) + " exact min eig " + fmt(exact) +
                                             " but sampled min eig " + fmt(cert.min_eig));
  }
  led.note(std::to_string(compared) + " Gaussian cases compared (" + std::to_string(negatives) + " not positive, " +
           std::to_string(in_band) + " inside the margin band)");

  // Every synthesized ancilla reconstructs to a state.
  const QuadratureGrid grid{8.0, 0.05};
  const std::vector<std::pair<std::string, GaussianDilation>> dilations{
      {"exact amplifier", exact_dilation(amplifier(2.0))},
      {"exact attenuator", exact_dilation(attenuator(0.5))},
      {"var-unitary identity", approx_var_unitary(identity_channel(1), 0.2)},
      {"var-unitary binary_displacement", approx_var_unitary(binary_displacement(vec({1.0, 0.0})), 0.2)},
      {"fixed-unitary identity", approx_fixed_unitary(identity_channel(1), 0.2)},
      {"fixed-unitary binary_displacement", approx_fixed_unitary(binary_displacement(vec({1.0, 0.0})), 0.2)},
      {"fixed-unitary amplifier", approx_fixed_unitary(amplifier(2.0), 0.2)}};
  double worst_trace = 0.0;
  double worst_eig = 0.0;
  for (const auto& [name, d] : dilations) {
    ReconstructionOptions opt;
    opt.check_trace = false;
    const FockOperator T = operator_from_char(d.ancilla, grid, 20, opt);
    const double tr_err = std::abs(T.trace().real() - 1.0);
    const double me = min_eigenvalue(T);
    worst_trace = std::max(worst_trace, tr_err);
    worst_eig = std::min(worst_eig, me);
    led.check(tr_err <= 1e-3, name + " ancilla trace error " + fmt(tr_err));
    led.check(me >= -1e-3, name + " ancilla min eig " + fmt(me));
  }
  led.note(std::to_string(dilations.size()) + " ancillas, worst trace error " + fmt(worst_trace) +
           ", min eig " + fmt(worst_eig));
  return led.outcome();
}

Outcome criterion_fock() {
  Ledger led;
  const QuadratureGrid grid{8.0, 0.05};

  // Round trips against states built directly in the number basis.
  {
    const int c = 20;
    const double vac = trace_distance(operator_from_char(CharFn::vacuum(1), grid, c), FockOperator::projector(1, c, {0}));
    led.check(vac <= 1e-3, "vacuum round trip " + fmt(vac));
    const RealVector s = vec({0.5, -0.3});
    const double coh = trace_distance(operator_from_char(CharFn::coherent(s), grid, c), coherent_state_fock(s, c));
    led.check(coh <= 1e-3, "coherent round trip " + fmt(coh));
    const int ct = 30;
    FockOperator thermal = FockOperator::zero(1, ct);
    const double nbar = 1.0;  // V = 3 I
    for (int k = 0; k < ct; ++k) thermal.matrix(k, k) = std::pow(nbar, k) / std::pow(nbar + 1.0, k + 1);
    const double th = trace_distance(
        operator_from_char(CharFn::gaussian_state(3.0 * RealMatrix::Identity(2, 2)), grid, ct), thermal);
    led.check(th <= 1e-3 + std::pow(0.5, ct), "thermal round trip " + fmt(th));
    led.note("round trips " + fmt(vac) + ", " + fmt(coh) + ", " + fmt(th));
  }

  // Weyl relation on the leading block of a cutoff-40 truncation.
  {
    const int c = 40;
    const int keep = 20;
    Rng rng(splitmix64(kSeed + 6));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const RealVector a = rng.in_ball(2, 1.0);
      const RealVector b = rng.in_ball(2, 1.0);
      const RealVector ab = a + b;
      const ComplexMatrix lhs = displacement_matrix_1mode(a(0), a(1), c) * displacement_matrix_1mode(b(0), b(1), c);
      const ComplexMatrix rhs = std::exp(cplx(0.0, -0.5 * symplectic_product(a, b))) *
                                displacement_matrix_1mode(ab(0), ab(1), c);
      worst = std::max(worst, (lhs - rhs).topLeftCorner(keep, keep).cwiseAbs().maxCoeff());
    }
    led.check(worst <= 1e-6, "Weyl defect " + fmt(worst));
    led.note("Weyl defect " + fmt(worst));
  }

  // Parseval on Fock-basis pairs.
  {
    const int c = 15;
    const std::vector<std::pair<FockOperator, FockOperator>> pairs{
        {FockOperator::projector(1, c, {0}), FockOperator::projector(1, c, {0})},
        {FockOperator::projector(1, c, {0}), FockOperator::projector(1, c, {1})},
        {FockOperator::projector(1, c, {1}), FockOperator::projector(1, c, {1})},
        {FockOperator::projector(1, c, {2}), coherent_state_fock(vec({0.7, 0.2}), c)}};
    double worst = 0.0;
    for (const auto& [a, b] : pairs) {
      const ParsevalReport p = parseval(a, b, grid);
      worst = std::max(worst, p.difference);
    }
    led.check(worst <= 1e-3, "Parseval difference " + fmt(worst));
    led.note("Parseval " + fmt(worst));
  }

  // Stinespring simulation against the characteristic-function prediction.
  {
    const RealVector s = vec({0.3, 0.0});
    const int c = 15;
    StinespringOptions opt;
    opt.cutoff = c;
    const FockOperator rho = coherent_state_fock(s, c);
    const auto probes = ball_sample(2, 50, 2.0, kSeed + 2);
    const std::vector<std::pair<std::string, GaussianDilation>> cases{
        {"amplifier exact", exact_dilation(amplifier(2.0))},
        {"identity fixed-unitary eps 0.05", approx_fixed_unitary(identity_channel(1), 0.05)}};
    for (const auto& [name, d] : cases) {
      const StinespringResult st = stinespring_apply(d, rho, opt);
      const CharFn predicted = apply_dilation_char(d, CharFn::coherent(s));
      double gap = 0.0;
      for (const auto& xi : probes) gap = std::max(gap, std::abs(char_of_operator(st.output, xi) - predicted(xi)));
      led.check(gap <= 5e-2, name + " Stinespring discrepancy " + fmt(gap));
      led.note(name + " discrepancy " + fmt(gap) + " (ancilla captured " + fmt(st.ancilla_captured_trace) + ")");
    }
  }
  return led.outcome();
}

Outcome criterion_bk() {
  Ledger led;
  RunConfig cfg;
  cfg.epsilons = {0.5, 0.2, 0.1, 0.05, 0.01};
  const CommandResult r = cmd_sweep(Json::object(), "bk", StateSpec::parse("coherent:0.5"), cfg, true);
  led.check(r.exit_code == 0, "bk sweep exit " + std::to_string(r.exit_code));
  if (r.exit_code != 0) return led.outcome();
  const auto rows = sweep_rows(r.report);
  std::string trail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double td = rows[i].trace_distance.value_or(1.0);
    if (i > 0) led.check(td < rows[i - 1].trace_distance.value_or(1.0), "not decreasing at sigma " + fmt(rows[i].epsilon));
    trail += (i ? " " : "") + fmt(td);
  }
  const double last = rows.back().trace_distance.value_or(1.0);
  led.check(last <= 0.05, "trace distance " + fmt(last) + " at sigma 0.01");
  led.note("trace distances " + trail);
  return led.outcome();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Outcome (*run)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "structural identities", 10.0, criterion_structural},
      {2, "algorithm action identities", 5.0, criterion_actions},
      {3, "epsilon convergence", 5.0, criterion_convergence},
      {4, "binary displacement no-go", 2.0, criterion_no_go},
      {5, "positivity machinery", 60.0, criterion_positivity},
      {6, "Fock backend", 120.0, criterion_fock},
      {7, "BK noise limit", 30.0, criterion_bk},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("CRITERION %d %s: %s [%.2f s / %.0f s%s] %s\n", c.id, pass ? "PASS" : "FAIL", c.name, secs,
                c.budget_s, in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

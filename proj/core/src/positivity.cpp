#include "bosonic/char_fn.hpp"

#include "bosonic/errors.hpp"
#include "bosonic/parallel.hpp"
#include "bosonic/phase_space.hpp"
#include "bosonic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bosonic {

std::uint64_t Sampler::set_seed(int k) const {
  return splitmix64(seed + static_cast<std::uint64_t>(k));
}

double Sampler::set_radius(int k) const {
  const int level = scales > 0 ? k % scales : 0;
  return std::ldexp(radius, -level);
}

std::vector<PhasePoint> Sampler::point_set(int k, int dim) const {
  if (points_per_set < 1) throw InvalidArgument("Sampler: points_per_set must be positive");
  Rng rng(set_seed(k));
  std::vector<PhasePoint> points;
  points.reserve(static_cast<std::size_t>(points_per_set));
  points.push_back(PhasePoint::Zero(dim));
  const double r = set_radius(k);
  for (int i = 1; i < points_per_set; ++i) points.push_back(rng.in_ball(dim, r));
  return points;
}

ComplexMatrix gram_matrix(const CharFn& f, const RealMatrix& A,
                          const std::vector<PhasePoint>& points) {
  const auto count = static_cast<Eigen::Index>(points.size());
  if (A.rows() != f.arity() || A.cols() != f.arity()) {
    throw DimensionMismatch("gram_matrix: A must be " + std::to_string(f.arity()) + " square");
  }
  ComplexMatrix G(count, count);
  for (Eigen::Index mu = 0; mu < count; ++mu) {
    const PhasePoint& a = points[static_cast<std::size_t>(mu)];
    if (a.size() != f.arity()) throw DimensionMismatch("gram_matrix: point dimension mismatch");
    const RealVector Aa = A.transpose() * a;
    for (Eigen::Index nu = 0; nu < count; ++nu) {
      const PhasePoint& b = points[static_cast<std::size_t>(nu)];
      const double twist = 0.5 * Aa.dot(b);
      G(mu, nu) = f(a - b) * cplx{std::cos(twist), std::sin(twist)};
    }
  }
  return G;
}

namespace {

struct SetResult {
  double min_eig = std::numeric_limits<double>::infinity();
  double defect = 0.0;
};

SetResult evaluate_set(const CharFn& f, const RealMatrix& A, const std::vector<PhasePoint>& pts) {
  const ComplexMatrix G = gram_matrix(f, A, pts);
  const ComplexMatrix H = 0.5 * (G + G.adjoint());
  SetResult r;
  r.defect = (G - G.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(H, Eigen::EigenvaluesOnly);
  r.min_eig = solver.eigenvalues().minCoeff();
  return r;
}

}  // namespace

PositivityCertificate check_a_positive(const CharFn& f, const RealMatrix& A,
                                       const Sampler& sampler, double tol) {
  if (A.rows() != f.arity() || A.cols() != f.arity()) {
    throw DimensionMismatch("check_a_positive: A does not match the function arity");
  }
  PositivityCertificate cert;
  cert.A = A;
  cert.sampler = sampler;
  cert.tol = tol;

  std::vector<SetResult> results(static_cast<std::size_t>(std::max(0, sampler.sets)));
  parallel_for(results.size(), [&](std::size_t k) {
    results[k] = evaluate_set(f, A, sampler.point_set(static_cast<int>(k), f.arity()));
  });

  cert.min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < results.size(); ++k) {
    cert.hermitian_defect = std::max(cert.hermitian_defect, results[k].defect);
    if (results[k].min_eig < cert.min_eig) {
      cert.min_eig = results[k].min_eig;
      cert.worst_set = static_cast<int>(k);
    }
  }
  cert.pass = cert.min_eig >= -tol;
  if (!cert.pass) cert.witness = sampler.point_set(cert.worst_set, f.arity());
  return cert;
}

ExactGaussianCheck gaussian_a_positive_exact(const RealMatrix& M, const RealMatrix& A,
                                             double tol) {
  if (M.rows() != M.cols() || A.rows() != A.cols() || M.rows() != A.rows()) {
    throw DimensionMismatch("gaussian_a_positive_exact: M and A must be square of equal size");
  }
  if (M.size() && (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, M.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("gaussian_a_positive_exact: M must be symmetric");
  }
  if (A.size() && (A + A.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("gaussian_a_positive_exact: A must be skew-symmetric");
  }
  const ComplexMatrix H = M.cast<cplx>() + cplx{0.0, 1.0} * A.cast<cplx>();
  ExactGaussianCheck out;
  out.min_eig = min_eig_hermitian(H, 1e-9 * std::max(1.0, H.size() ? H.cwiseAbs().maxCoeff() : 0.0));
  out.pass = out.min_eig >= -tol;
  return out;
}

BochnerReport bochner_check(const CharFn& f, const Sampler& sampler,
                            const BochnerOptions& options) {
  BochnerReport report;
  const int dim = f.arity();
  report.value_at_zero_error = std::abs(f(PhasePoint::Zero(dim)) - 1.0);
  report.normalized = report.value_at_zero_error <= options.normalization_tol;

  // Axis directions in both signs, then a few seeded random directions.
  std::vector<PhasePoint> probes;
  for (int i = 0; i < dim; ++i) {
    PhasePoint e = PhasePoint::Zero(dim);
    e(i) = options.probe_radius;
    probes.push_back(e);
    probes.push_back(-e);
  }
  Rng rng(splitmix64(sampler.seed ^ 0x5bd1e995ULL));
  for (int i = 0; i < 16 && dim > 0; ++i) {
    PhasePoint v(dim);
    for (int j = 0; j < dim; ++j) v(j) = rng.normal();
    if (v.norm() > 0.0) probes.push_back(v * (options.probe_radius / v.norm()));
  }
  for (const PhasePoint& p : probes) {
    report.continuity_deviation = std::max(report.continuity_deviation, std::abs(f(p) - 1.0));
  }
  report.continuous = report.continuity_deviation <= options.probe_threshold;

  report.positivity = check_a_positive(f, omega(dim / 2), sampler, options.eig_tol);
  return report;
}

BoundReport bound_check(const CharFn& f, const Sampler& sampler, double tol) {
  const double at_zero = std::abs(f(PhasePoint::Zero(f.arity())));
  BoundReport report;
  report.worst_excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < sampler.sets; ++k) {
    for (const PhasePoint& p : sampler.point_set(k, f.arity())) {
      report.worst_excess = std::max(report.worst_excess, std::abs(f(p)) - at_zero);
    }
  }
  report.pass = report.worst_excess <= tol;
  return report;
}

}  // namespace bosonic

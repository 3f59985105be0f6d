#pragma once

#include "bosonic/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace bosonic {

class CharFn;

namespace node {

struct One {
  int dim = 0;
};

// exp(-1/4 xi^T M xi + i b^T xi)
struct GaussianKernel {
  RealMatrix M;
  RealVector b;
};

// cos(s^T Omega xi)
struct Cosine {
  RealVector s;
};

// sum_j w_j exp(i xi^T Omega s_j)
struct DisplacementMixture {
  std::vector<double> weights;
  std::vector<RealVector> points;
};

struct Product {
  std::vector<CharFn> factors;
};

// inner(L xi)
struct PullBack {
  std::shared_ptr<const CharFn> inner;
  RealMatrix L;
};

}  // namespace node

using CharNode = std::variant<node::One, node::GaussianKernel, node::Cosine,
                              node::DisplacementMixture, node::Product, node::PullBack>;

/// Immutable expression tree for a function R^{2n} -> C built from the
/// kernels that occur in linear bosonic channels and their dilations.
class CharFn {
 public:
  static CharFn one(int dim);
  static CharFn gaussian_kernel(RealMatrix M, RealVector b);
  static CharFn gaussian_kernel(RealMatrix M);
  /// State form exp(-1/4 xi^T Omega^T V Omega xi + i s^T Omega xi), stored
  /// as a kernel with M = Omega^T V Omega and b = Omega^T s.
  static CharFn gaussian_state(const RealMatrix& V, const RealVector& s);
  static CharFn gaussian_state(const RealMatrix& V);
  static CharFn vacuum(int n);
  static CharFn coherent(const RealVector& s);
  static CharFn cosine(RealVector s);
  static CharFn mixture(std::vector<double> weights, std::vector<RealVector> points);
  static CharFn product(std::vector<CharFn> factors);
  static CharFn pullback(CharFn inner, RealMatrix L);

  /// Dimension of the argument, 2n for an n-mode function.
  int arity() const { return arity_; }
  int modes() const { return arity_ / 2; }

  cplx operator()(const PhasePoint& xi) const;

  const CharNode& node() const { return *node_; }

 private:
  CharFn(std::shared_ptr<const CharNode> node, int arity);

  std::shared_ptr<const CharNode> node_;
  int arity_ = 0;
};

/// Tree evaluation; throws DimensionMismatch when xi has the wrong size.
cplx eval_char(const CharFn& f, const PhasePoint& xi);

/// One term coef * exp(-1/4 xi^T M xi + i b^T xi).
struct GaussianTerm {
  cplx coef{1.0, 0.0};
  RealMatrix M;
  RealVector b;

  cplx operator()(const PhasePoint& xi) const;
};

/// Every node kind expands into a finite sum of Gaussian terms. Throws
/// InvalidArgument when the expansion would exceed max_terms.
std::vector<GaussianTerm> gaussian_terms(const CharFn& f, std::size_t max_terms = 4096);

// ---------------------------------------------------------------------------
// Positivity certificates

/// Point-set sampler for A-positivity checks. Set k draws its points
/// uniformly from the ball of radius radius * 2^-(k mod scales) with the
/// origin always included, using the per-set seed splitmix64(seed + k).
struct Sampler {
  std::uint64_t seed = 20190417;
  int points_per_set = 8;
  int sets = 50;
  double radius = 4.0;
  int scales = 8;

  std::uint64_t set_seed(int k) const;
  double set_radius(int k) const;
  std::vector<PhasePoint> point_set(int k, int dim) const;
};

/// [f(xi_mu - xi_nu) exp(i/2 xi_mu^T A xi_nu)]_{mu,nu}
ComplexMatrix gram_matrix(const CharFn& f, const RealMatrix& A,
                          const std::vector<PhasePoint>& points);

struct PositivityCertificate {
  RealMatrix A;
  Sampler sampler;
  double tol = 1e-8;
  double min_eig = 0.0;
  double hermitian_defect = 0.0;
  int worst_set = -1;
  bool pass = false;
  std::vector<PhasePoint> witness;  // worst point set, kept when pass is false
};

PositivityCertificate check_a_positive(const CharFn& f, const RealMatrix& A,
                                       const Sampler& sampler, double tol = 1e-8);

struct ExactGaussianCheck {
  bool pass = false;
  double min_eig = 0.0;
};

/// exp(-1/4 xi^T M xi) is A-positive iff M + iA >= 0.
ExactGaussianCheck gaussian_a_positive_exact(const RealMatrix& M, const RealMatrix& A,
                                             double tol = 1e-8);

struct BochnerReport {
  bool normalized = false;  // |f(0) - 1| <= tol
  bool continuous = false;  // |f(xi) - 1| <= 0.1 on the probe sphere
  PositivityCertificate positivity;  // A = Omega
  double value_at_zero_error = 0.0;
  double continuity_deviation = 0.0;

  bool pass() const { return normalized && continuous && positivity.pass; }
};

struct BochnerOptions {
  double normalization_tol = 1e-9;
  double probe_radius = 1e-3;
  double probe_threshold = 0.1;
  double eig_tol = 1e-8;
};

BochnerReport bochner_check(const CharFn& f, const Sampler& sampler,
                            const BochnerOptions& options = {});

struct BoundReport {
  bool pass = false;
  double worst_excess = 0.0;  // max |f(xi)| - |f(0)| over sampled points
};

BoundReport bound_check(const CharFn& f, const Sampler& sampler, double tol = 1e-12);

}  // namespace bosonic

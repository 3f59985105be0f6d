#include "bosonic/dilation.hpp"

#include "bosonic/errors.hpp"

#include <cmath>
#include <sstream>

namespace bosonic {

namespace {

double max_abs(const RealMatrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

double spectral_norm(const RealMatrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<RealMatrix> svd(M);
  return svd.singularValues()(0);
}

}  // namespace

std::string to_string(DilationAlgorithm a) {
  switch (a) {
    case DilationAlgorithm::manual: return "manual";
    case DilationAlgorithm::exact: return "exact";
    case DilationAlgorithm::var_unitary: return "var-unitary";
    case DilationAlgorithm::fixed_unitary: return "fixed-unitary";
  }
  return "manual";
}

DilationAlgorithm dilation_algorithm_from_string(const std::string& name) {
  if (name == "manual") return DilationAlgorithm::manual;
  if (name == "exact") return DilationAlgorithm::exact;
  if (name == "var-unitary" || name == "var_unitary") return DilationAlgorithm::var_unitary;
  if (name == "fixed-unitary" || name == "fixed_unitary") return DilationAlgorithm::fixed_unitary;
  throw InvalidArgument("unknown dilation algorithm '" + name + "'");
}

GaussianDilation make_dilation(const RealMatrix& X, const RealMatrix& Y, const RealVector& s,
                               const CharFn& ancilla, double tol) {
  if (X.rows() != X.cols() || X.rows() % 2 != 0 || X.rows() == 0) {
    throw DimensionMismatch("dilation: X must be a nonempty 2n x 2n matrix");
  }
  if (Y.cols() != X.rows() || Y.rows() % 2 != 0) {
    throw DimensionMismatch("dilation: Y must be 2m x 2n");
  }
  if (ancilla.arity() != Y.rows()) {
    throw DimensionMismatch("dilation: ancilla arity " + std::to_string(ancilla.arity()) +
                            " does not match Y with " + std::to_string(Y.rows()) + " rows");
  }
  GaussianDilation d;
  d.n = static_cast<int>(X.rows() / 2);
  d.m = static_cast<int>(Y.rows() / 2);
  d.X = X;
  d.Y = Y;
  d.s = s.size() == 0 ? RealVector::Zero(X.rows()) : s;
  if (d.s.size() != X.rows()) throw DimensionMismatch("dilation: s must have length 2n");
  d.ancilla = ancilla;
  d.completion = symplectic_complete(X, Y, tol);
  return d;
}

CharFn apply_dilation_char(const GaussianDilation& d, const CharFn& chi_in) {
  if (chi_in.arity() != d.X.rows()) {
    throw DimensionMismatch("apply_dilation_char: input arity " + std::to_string(chi_in.arity()) +
                            " does not match " + std::to_string(d.n) + " system modes");
  }
  std::vector<CharFn> factors{CharFn::pullback(chi_in, d.X), CharFn::pullback(d.ancilla, d.Y)};
  if (!d.s.isZero(0.0)) {
    // exp(i s^T Omega xi) = exp(i (Omega^T s)^T xi)
    factors.insert(factors.begin(),
                   CharFn::gaussian_kernel(RealMatrix::Zero(d.X.rows(), d.X.rows()),
                                           -apply_omega(d.s)));
  }
  return CharFn::product(std::move(factors));
}

GaussianDilation exact_dilation(const LinearBosonicChannel& ch, const DilationOptions& options) {
  const SkewCanonicalForm canon = skew_canonical(j_of_x(ch.X), options.tol.structural);
  const double smallest = canon.d.size() ? canon.d.minCoeff() : 0.0;
  if (smallest <= options.tol.rank) {
    std::ostringstream msg;
    msg << "J(X) is singular (smallest canonical pair " << smallest
        << "); no exact dilation on n ancilla modes. Use --algorithm var-unitary or fixed-unitary instead";
    throw SingularJ(msg.str());
  }
  const Eigen::Index two_n = ch.X.rows();
  RealVector root(two_n);
  for (Eigen::Index j = 0; j < canon.d.size(); ++j) {
    root(2 * j) = root(2 * j + 1) = std::sqrt(canon.d(j));
  }
  const RealMatrix Y = root.asDiagonal() * canon.O;
  const RealMatrix Y_inv = canon.O.transpose() * root.cwiseInverse().asDiagonal();
  GaussianDilation d = make_dilation(ch.X, Y, RealVector::Zero(two_n),
                                     CharFn::pullback(ch.f, Y_inv), options.tol.structural);
  d.provenance.algorithm = DilationAlgorithm::exact;
  return d;
}

LinearBosonicChannel var_unitary_channel(const LinearBosonicChannel& ch, double epsilon) {
  const RealMatrix W = omega(ch.n);
  const RealMatrix X_eps = (1.0 - epsilon) * ch.X;
  const double v = spectral_norm(X_eps.transpose() * W * X_eps - ch.X.transpose() * W * ch.X);
  const auto dim = ch.X.rows();
  CharFn g = CharFn::gaussian_kernel(v * RealMatrix::Identity(dim, dim));
  return channel_unchecked(X_eps, CharFn::product({ch.f, g}));
}

GaussianDilation approx_var_unitary(const LinearBosonicChannel& ch, double epsilon,
                                    const DilationOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("approx_var_unitary: epsilon must lie in (0, 1)");
  }
  double eps = epsilon;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    try {
      GaussianDilation d = exact_dilation(var_unitary_channel(ch, eps), options);
      d.provenance = Provenance{DilationAlgorithm::var_unitary, epsilon, eps, attempt};
      return d;
    } catch (const SingularJ&) {
      eps *= 1.0 + std::ldexp(1.0, -10);
    }
  }
  std::ostringstream msg;
  msg << "J((1 - eps) X) stayed singular from eps = " << epsilon << " through " << eps << " after "
      << options.max_retries << " retries";
  throw EpsilonSingular(msg.str());
}

GaussianDilation approx_fixed_unitary(const LinearBosonicChannel& ch, double epsilon,
                                      const DilationOptions& options) {
  if (!(epsilon > 0.0)) throw InvalidArgument("approx_fixed_unitary: epsilon must be positive");
  FixedUnitaryData data;
  data.epsilon = epsilon;
  data.canonical = skew_canonical(j_of_x(ch.X), options.tol.structural);
  const RealVector& dj = data.canonical.d;
  const int n = ch.n;
  for (Eigen::Index j = 0; j < dj.size(); ++j) {
    if (dj(j) <= options.tol.rank) ++data.k;
  }
  const int m = n + data.k;

  RealMatrix Yp = RealMatrix::Zero(2 * m, 2 * n);
  RealMatrix Ytp = RealMatrix::Zero(2 * n, 2 * m);
  RealMatrix W = RealMatrix::Zero(2 * m, 2 * m);
  RealMatrix Qp = RealMatrix::Zero(2 * n, 2 * n);
  Eigen::Index row = 0;
  for (int j = 0; j < n; ++j) {
    const Eigen::Index c = 2 * j;
    if (dj(j) > options.tol.rank) {
      const double r = std::sqrt(dj(j));
      Yp(row, c) = Yp(row + 1, c + 1) = r;
      Ytp(c, row) = Ytp(c + 1, row + 1) = 1.0 / r;
      row += 2;
    } else {
      // Both quadratures go to position quadratures of two fresh modes.
      Yp(row, c) = 1.0;
      Yp(row + 2, c + 1) = 1.0;
      Ytp(c, row) = 1.0;
      Ytp(c + 1, row + 2) = 1.0;
      W(row, row) = W(row + 2, row + 2) = epsilon;
      W(row + 1, row + 1) = W(row + 3, row + 3) = 1.0 / epsilon;
      Qp(c, c) = Qp(c + 1, c + 1) = 1.0;
      row += 4;
    }
  }
  const RealMatrix& O = data.canonical.O;
  data.Y = Yp * O;
  data.Y_tilde = O.transpose() * Ytp;
  data.P = data.Y * data.Y_tilde;
  data.W = W;
  data.Q = O.transpose() * Qp * O;

  CharFn ancilla = CharFn::product(
      {CharFn::pullback(ch.f, data.Y_tilde), CharFn::gaussian_kernel(data.W)});
  GaussianDilation d = make_dilation(ch.X, data.Y, RealVector::Zero(2 * n), ancilla,
                                     options.tol.structural);
  d.provenance = Provenance{DilationAlgorithm::fixed_unitary, epsilon, epsilon, 0};
  d.fixed = std::move(data);
  return d;
}

DilationReport check_dilation(const GaussianDilation& d, const Sampler& sampler,
                              const Tolerances& tol) {
  DilationReport r;
  const RealMatrix Wn = omega(d.n);
  const RealMatrix Wm = omega(d.m);
  r.xy_residual = max_abs(d.X.transpose() * Wn * d.X + d.Y.transpose() * Wm * d.Y - Wn);
  if (r.xy_residual > tol.structural) {
    r.failures.push_back("X^T Omega X + Y^T Omega Y deviates from Omega by " +
                         std::to_string(r.xy_residual));
  }
  const RealMatrix& S = d.completion.S;
  r.symplectic_residual = S.size() ? symplectic_residual(S) : 0.0;
  if (S.rows() != 2 * (d.n + d.m)) {
    r.failures.push_back("completion has the wrong size");
  } else {
    if (r.symplectic_residual > tol.structural) {
      r.failures.push_back("completion is not symplectic, residual " +
                           std::to_string(r.symplectic_residual));
    }
    RealMatrix stacked(2 * (d.n + d.m), 2 * d.n);
    stacked << d.X, d.Y;
    r.columns_match = S.leftCols(2 * d.n) == stacked;
    if (!r.columns_match) r.failures.push_back("completion does not start with [X; Y]");
  }

  BochnerOptions bo;
  bo.eig_tol = tol.eigen;
  r.ancilla = bochner_check(d.ancilla, sampler, bo);
  if (!r.ancilla.normalized) r.failures.push_back("ancilla is not normalized");
  if (!r.ancilla.continuous) r.failures.push_back("ancilla fails the continuity probe");
  if (!r.ancilla.positivity.pass) {
    r.failures.push_back("ancilla is not Omega-positive, min eigenvalue " +
                         std::to_string(r.ancilla.positivity.min_eig));
  }

  const SkewCanonicalForm canon = skew_canonical(j_of_x(d.X), tol.structural);
  r.min_nonzero_pair = 0.0;
  for (Eigen::Index j = 0; j < canon.d.size(); ++j) {
    const double v = canon.d(j);
    if (v > tol.rank && (r.min_nonzero_pair == 0.0 || v < r.min_nonzero_pair)) {
      r.min_nonzero_pair = v;
    }
    if (v > tol.rank && v < tol.conditioning) {
      std::ostringstream msg;
      msg << "canonical pair " << j << " of J(X) is " << v
          << ", close to the rank threshold; results may be ill-conditioned";
      r.warnings.push_back(msg.str());
    }
  }

  if (d.fixed) {
    const FixedUnitaryData& f = *d.fixed;
    r.penrose_residual = max_abs(f.Y_tilde * f.Y - RealMatrix::Identity(2 * d.n, 2 * d.n));
    r.sandwich_residual = max_abs(f.Y.transpose() * f.W * f.Y - f.epsilon * f.Q);
    const RealMatrix gap = Wm - f.P * Wm * f.P;
    const ComplexMatrix H = f.W.cast<cplx>() - cplx{0.0, 1.0} * gap.cast<cplx>();
    r.wg_min_eig = min_eig_hermitian(H, 1e-9 * std::max(1.0, max_abs(f.W)));
    if (r.penrose_residual > tol.structural) {
      r.failures.push_back("Y_tilde Y deviates from identity by " +
                           std::to_string(r.penrose_residual));
    }
    if (r.sandwich_residual > tol.structural) {
      r.failures.push_back("Y^T W Y deviates from eps Q by " + std::to_string(r.sandwich_residual));
    }
    if (r.wg_min_eig < -1e-10) {
      r.failures.push_back("W - i(Omega - P Omega P) has eigenvalue " +
                           std::to_string(r.wg_min_eig));
    }
  }
  return r;
}

TruncatedAncilla truncate_ancilla(const GaussianDilation& d, int cutoff,
                                  const QuadratureGrid& grid) {
  TruncatedAncilla out;
  out.dilation = d;
  if (d.m == 0) {
    out.state = FockOperator{0, cutoff, ComplexMatrix::Ones(1, 1)};
    out.captured_trace = 1.0;
    return out;
  }
  ReconstructionOptions ro;
  ro.check_trace = false;
  FockOperator sigma = operator_from_char(d.ancilla, grid, cutoff, ro);
  out.captured_trace = sigma.trace().real();
  if (out.captured_trace < 0.5) {
    std::ostringstream msg;
    msg << "cutoff " << cutoff << " captures only " << out.captured_trace
        << " of the ancilla trace";
    throw CutoffTooSmall(msg.str());
  }
  out.delta = std::max(0.0, 1.0 - out.captured_trace);
  sigma.matrix /= out.captured_trace;
  out.state = std::move(sigma);
  return out;
}

}  // namespace bosonic

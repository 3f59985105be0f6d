#include "bosonic/phase_space.hpp"

#include "bosonic/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace bosonic {

namespace {

void require_even_square(const RealMatrix& M, const char* what) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0) {
    throw DimensionMismatch(std::string(what) + ": expected an even square matrix, got " +
                            std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
  }
}

double max_abs(const RealMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

}  // namespace

RealMatrix omega(int n) {
  if (n < 0) throw InvalidArgument("omega: negative mode count");
  RealMatrix W = RealMatrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    W(2 * j, 2 * j + 1) = 1.0;
    W(2 * j + 1, 2 * j) = -1.0;
  }
  return W;
}

double symplectic_product(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size() || a.size() % 2 != 0) {
    throw DimensionMismatch("symplectic_product: size mismatch");
  }
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.size(); j += 2) acc += a(j) * b(j + 1) - a(j + 1) * b(j);
  return acc;
}

RealVector apply_omega(const RealVector& v) {
  if (v.size() % 2 != 0) throw DimensionMismatch("apply_omega: odd dimension");
  RealVector out(v.size());
  for (Eigen::Index j = 0; j < v.size(); j += 2) {
    out(j) = v(j + 1);
    out(j + 1) = -v(j);
  }
  return out;
}

RealMatrix j_of_x(const RealMatrix& X) {
  require_even_square(X, "j_of_x");
  const RealMatrix W = omega(static_cast<int>(X.rows() / 2));
  const RealMatrix J = W - X.transpose() * W * X;
  return 0.5 * (J - J.transpose());
}

RealMatrix SkewCanonicalForm::reconstruct() const {
  const Eigen::Index n = d.size();
  RealMatrix B = RealMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    B(2 * j, 2 * j + 1) = d(j);
    B(2 * j + 1, 2 * j) = -d(j);
  }
  return O.transpose() * B * O;
}

SkewCanonicalForm skew_canonical(const RealMatrix& A, double tol) {
  require_even_square(A, "skew_canonical");
  const double scale = std::max(1.0, max_abs(A));
  if (max_abs(A + A.transpose()) > tol * scale) {
    throw InvalidArgument("skew_canonical: input is not skew-symmetric");
  }
  const Eigen::Index dim = A.rows();
  const RealMatrix As = 0.5 * (A - A.transpose());

  struct Pair {
    RealVector first;
    RealVector second;
    double d;
  };
  std::vector<Pair> pairs;
  std::vector<RealVector> kernel;

  Eigen::RealSchur<RealMatrix> schur(As);
  const RealMatrix& T = schur.matrixT();
  const RealMatrix& U = schur.matrixU();
  for (Eigen::Index i = 0; i < dim;) {
    if (i + 1 < dim && T(i + 1, i) != 0.0) {
      // As = U T U^T, so this block contributes b (u_i u_{i+1}^T - u_{i+1} u_i^T).
      const double b = 0.5 * (T(i, i + 1) - T(i + 1, i));
      if (b >= 0.0) {
        pairs.push_back({U.col(i), U.col(i + 1), b});
      } else {
        pairs.push_back({U.col(i + 1), U.col(i), -b});
      }
      i += 2;
    } else {
      kernel.push_back(U.col(i));
      i += 1;
    }
  }
  if (kernel.size() % 2 != 0) {
    throw Error("skew_canonical: odd number of real Schur 1x1 blocks");
  }
  for (std::size_t k = 0; k < kernel.size(); k += 2) {
    const double b = kernel[k].dot(As * kernel[k + 1]);
    if (b >= 0.0) {
      pairs.push_back({kernel[k], kernel[k + 1], b});
    } else {
      pairs.push_back({kernel[k + 1], kernel[k], -b});
    }
  }

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pairs[a].d > pairs[b].d; });

  SkewCanonicalForm out;
  out.O.resize(dim, dim);
  out.d.resize(dim / 2);
  for (std::size_t j = 0; j < order.size(); ++j) {
    const Pair& p = pairs[order[j]];
    out.O.row(static_cast<Eigen::Index>(2 * j)) = p.first.transpose();
    out.O.row(static_cast<Eigen::Index>(2 * j + 1)) = p.second.transpose();
    out.d(static_cast<Eigen::Index>(j)) = p.d;
  }
  return out;
}

RealMatrix factor_skew_invertible(const RealMatrix& J, double rank_tol) {
  const SkewCanonicalForm c = skew_canonical(J);
  if (c.d.size() > 0 && c.d.minCoeff() <= rank_tol) {
    throw SingularJ("J is singular: smallest canonical pair magnitude " +
                    std::to_string(c.d.minCoeff()) + " <= " + std::to_string(rank_tol));
  }
  RealMatrix Y = c.O;
  for (Eigen::Index j = 0; j < c.d.size(); ++j) {
    Y.middleRows(2 * j, 2) *= std::sqrt(c.d(j));
  }
  return Y;
}

RealMatrix moore_penrose(const RealMatrix& Y) {
  if (Y.size() == 0) return RealMatrix::Zero(Y.cols(), Y.rows());
  Eigen::JacobiSVD<RealMatrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(Y.rows(), Y.cols())) *
                        std::numeric_limits<double>::epsilon() * sv(0);
  RealVector inv = RealVector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double symplectic_residual(const RealMatrix& S) {
  require_even_square(S, "symplectic_residual");
  const RealMatrix W = omega(static_cast<int>(S.rows() / 2));
  return max_abs(S.transpose() * W * S - W);
}

SymplecticCompletion symplectic_complete(const RealMatrix& X, const RealMatrix& Y,
                                         double tol) {
  require_even_square(X, "symplectic_complete");
  const Eigen::Index two_n = X.rows();
  if (Y.cols() != two_n || Y.rows() % 2 != 0) {
    throw DimensionMismatch("symplectic_complete: Y must be 2m x 2n with 2n = " +
                            std::to_string(two_n));
  }
  const int n = static_cast<int>(two_n / 2);
  const int m = static_cast<int>(Y.rows() / 2);
  const RealMatrix Wn = omega(n);
  const RealMatrix Wm = omega(m);
  const double residual =
      max_abs(X.transpose() * Wn * X + Y.transpose() * Wm * Y - Wn);
  if (residual > tol) {
    throw PairNotIsometric("X^T Omega X + Y^T Omega Y deviates from Omega by " +
                           std::to_string(residual));
  }

  const Eigen::Index dim = 2 * (n + m);
  SymplecticCompletion out;
  out.first_columns.resize(dim, two_n);
  out.first_columns << X, Y;
  out.S.resize(dim, dim);
  out.S.leftCols(two_n) = out.first_columns;

  // The remaining columns span the symplectic complement of [X; Y]. Taking
  // an orthonormal basis of it and normalizing through the skew canonical
  // form keeps the extra squeezing in S as small as the complement allows.
  const RealMatrix constraint = out.first_columns.transpose() * omega(n + m);
  Eigen::JacobiSVD<RealMatrix> svd(constraint, Eigen::ComputeFullV);
  const RealMatrix B = svd.matrixV().rightCols(dim - two_n);
  if (dim > two_n) {
    const RealMatrix K = B.transpose() * omega(n + m) * B;
    const RealMatrix F = factor_skew_invertible(0.5 * (K - K.transpose()), tol);
    out.S.rightCols(dim - two_n) = B * F.inverse();
  }
  return out;
}

double min_eig_hermitian(const ComplexMatrix& M, double tol) {
  if (M.rows() != M.cols()) throw DimensionMismatch("min_eig_hermitian: non-square input");
  if (M.size() == 0) return std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw InvalidArgument("min_eig_hermitian: input is not Hermitian");
  }
  const ComplexMatrix H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

EigenCheck heisenberg_check(const RealMatrix& V, double tol) {
  require_even_square(V, "heisenberg_check");
  if (max_abs(V - V.transpose()) > 1e-9 * std::max(1.0, max_abs(V))) {
    throw InvalidArgument("heisenberg_check: covariance matrix is not symmetric");
  }
  const RealMatrix W = omega(static_cast<int>(V.rows() / 2));
  ComplexMatrix M(V.rows(), V.cols());
  M.real() = V;
  M.imag() = W;
  EigenCheck out;
  out.min_eig = min_eig_hermitian(M);
  out.pass = out.min_eig >= -tol;
  return out;
}

RealMatrix EulerDecomposition::Z() const {
  const Eigen::Index n = squeezing.size();
  RealVector diag(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    diag(2 * j) = std::exp(squeezing(j));
    diag(2 * j + 1) = std::exp(-squeezing(j));
  }
  return diag.asDiagonal();
}

EulerDecomposition euler_decompose(const RealMatrix& S, double tol) {
  require_even_square(S, "euler_decompose");
  if (symplectic_residual(S) > tol * std::max(1.0, max_abs(S) * max_abs(S))) {
    throw NonSymplectic("euler_decompose: input is not symplectic");
  }
  const Eigen::Index dim = S.rows();
  const Eigen::Index n = dim / 2;

  // Polar part P = (S^T S)^{1/2} = exp(K), K symmetric and anticommuting with Omega.
  Eigen::SelfAdjointEigenSolver<RealMatrix> gram(S.transpose() * S);
  const RealVector lambda = gram.eigenvalues();
  const RealMatrix& Wv = gram.eigenvectors();
  RealVector log_half(dim), inv_sqrt(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    log_half(i) = 0.5 * std::log(lambda(i));
    inv_sqrt(i) = 1.0 / std::sqrt(lambda(i));
  }
  const RealMatrix K = Wv * log_half.asDiagonal() * Wv.transpose();
  const RealMatrix orth = S * Wv * inv_sqrt.asDiagonal() * Wv.transpose();

  Eigen::SelfAdjointEigenSolver<RealMatrix> ks(0.5 * (K + K.transpose()));
  const RealVector kappa = ks.eigenvalues();  // ascending
  const RealMatrix& kv = ks.eigenvectors();
  const double kappa_tol = 1e-10 * std::max(1.0, kappa.cwiseAbs().maxCoeff());

  RealMatrix basis(dim, dim);  // columns (u_1, w_1, u_2, w_2, ...), w = Omega^T u
  RealVector r = RealVector::Zero(n);
  Eigen::Index pairs = 0;
  for (Eigen::Index i = dim - 1; i >= 0 && pairs < n; --i) {
    if (kappa(i) <= kappa_tol) break;
    const RealVector u = kv.col(i);
    basis.col(2 * pairs) = u;
    basis.col(2 * pairs + 1) = -apply_omega(u);
    r(pairs) = kappa(i);
    ++pairs;
  }
  if (pairs < n) {
    // Unsqueezed subspace: Omega-invariant, pair each vector with its Omega^T image.
    RealMatrix proj = RealMatrix::Identity(dim, dim);
    for (Eigen::Index c = 0; c < 2 * pairs; ++c) proj -= basis.col(c) * basis.col(c).transpose();
    Eigen::SelfAdjointEigenSolver<RealMatrix> ps(0.5 * (proj + proj.transpose()));
    std::vector<RealVector> pool;
    for (Eigen::Index i = dim - 1; i >= 0; --i) {
      if (ps.eigenvalues()(i) > 0.5) pool.push_back(ps.eigenvectors().col(i));
    }
    for (const RealVector& candidate : pool) {
      if (pairs == n) break;
      RealVector u = candidate;
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index c = 0; c < 2 * pairs; ++c) u -= basis.col(c).dot(u) * basis.col(c);
      }
      const double norm = u.norm();
      if (norm < 1e-6) continue;
      u /= norm;
      basis.col(2 * pairs) = u;
      basis.col(2 * pairs + 1) = -apply_omega(u);
      ++pairs;
    }
    if (pairs != n) throw Error("euler_decompose: failed to complete symplectic eigenbasis");
  }

  EulerDecomposition out;
  out.O2 = basis.transpose();
  out.O1 = orth * basis;
  out.squeezing = r;
  return out;
}

}  // namespace bosonic

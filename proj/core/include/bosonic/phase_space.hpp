#pragma once

#include "bosonic/types.hpp"

#include <vector>

namespace bosonic {

/// Standard symplectic form on n modes, quadratures ordered (x_1, p_1, ..., x_n, p_n).
RealMatrix omega(int n);

/// a^T Omega b without materializing Omega.
double symplectic_product(const RealVector& a, const RealVector& b);

/// Omega * v without materializing Omega.
RealVector apply_omega(const RealVector& v);

/// Omega - X^T Omega X, symmetrized so the result is exactly skew.
RealMatrix j_of_x(const RealMatrix& X);

/// A = O^T (direct sum of [[0, d_j], [-d_j, 0]]) O with O orthogonal and
/// d sorted descending.
struct SkewCanonicalForm {
  RealMatrix O;
  RealVector d;

  /// Rebuilds O^T (+)_j d_j [[0,1],[-1,0]] O.
  RealMatrix reconstruct() const;
};

SkewCanonicalForm skew_canonical(const RealMatrix& A, double tol = 1e-9);

/// Y with Y^T Omega Y = J. Throws SingularJ when a canonical pair magnitude
/// is at or below rank_tol.
RealMatrix factor_skew_invertible(const RealMatrix& J, double rank_tol = 1e-10);

RealMatrix moore_penrose(const RealMatrix& Y);

struct SymplecticCompletion {
  RealMatrix S;              // 2(n+m) x 2(n+m)
  RealMatrix first_columns;  // the stacked [X; Y]
};

/// Extends the columns of [X; Y] to a symplectic basis by symplectic
/// Gram-Schmidt over the standard basis. Requires
/// X^T Omega_n X + Y^T Omega_m Y = Omega_n within tol.
SymplecticCompletion symplectic_complete(const RealMatrix& X, const RealMatrix& Y,
                                         double tol = 1e-9);

/// max |S^T Omega S - Omega|.
double symplectic_residual(const RealMatrix& S);

/// Smallest eigenvalue of a Hermitian matrix; throws InvalidArgument if
/// |M - M^dagger| exceeds tol anywhere.
double min_eig_hermitian(const ComplexMatrix& M, double tol = 1e-9);

struct EigenCheck {
  bool pass = false;
  double min_eig = 0.0;
};

/// Uncertainty relation V + i Omega >= 0.
EigenCheck heisenberg_check(const RealMatrix& V, double tol = 1e-8);

// Euler (Bloch-Messiah) decomposition S = O1 Z O2 with O1, O2 orthogonal
// symplectic and Z = (+)_j diag(e^{r_j}, e^{-r_j}), r_j >= 0.
struct EulerDecomposition {
  RealMatrix O1;
  RealVector squeezing;
  RealMatrix O2;

  RealMatrix Z() const;
};

EulerDecomposition euler_decompose(const RealMatrix& S, double tol = 1e-9);

}  // namespace bosonic

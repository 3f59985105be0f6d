#pragma once

#include "bosonic/channels.hpp"
#include "bosonic/char_fn.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/phase_space.hpp"
#include "bosonic/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bosonic {

enum class DilationAlgorithm { manual, exact, var_unitary, fixed_unitary };

std::string to_string(DilationAlgorithm a);
DilationAlgorithm dilation_algorithm_from_string(const std::string& name);

struct Provenance {
  DilationAlgorithm algorithm = DilationAlgorithm::manual;
  double epsilon = 0.0;       // as requested
  double epsilon_used = 0.0;  // after retries for the varying-unitary construction
  int retries = 0;
};

/// Blocks of the fixed-unitary construction. X, Y and the completion
/// depend on the channel only; epsilon enters through W alone.
struct FixedUnitaryData {
  SkewCanonicalForm canonical;  // of J(X)
  int k = 0;                    // canonical pairs counted as zero
  RealMatrix Y;                 // 2(n + k) x 2n
  RealMatrix Y_tilde;           // 2n x 2(n + k), left inverse of Y
  RealMatrix P;                 // Y Y_tilde
  RealMatrix W;                 // ancilla kernel
  RealMatrix Q;                 // projector onto ker J(X)
  double epsilon = 0.0;
};

/// chi(xi) -> exp(i s^T Omega xi) chi(X xi) chi_sigma(Y xi), realized by the
/// Gaussian unitary of `completion.S` on n system plus m ancilla modes.
struct GaussianDilation {
  int n = 0;
  int m = 0;
  RealMatrix X;
  RealMatrix Y;  // 2m x 2n
  RealVector s;
  CharFn ancilla = CharFn::one(0);
  SymplecticCompletion completion;
  Provenance provenance;
  std::optional<FixedUnitaryData> fixed;
};

struct DilationOptions {
  Tolerances tol{};
  int max_retries = 20;
};

/// Builds a dilation from explicit blocks, completing S. Throws
/// PairNotIsometric when X^T Omega X + Y^T Omega Y != Omega.
GaussianDilation make_dilation(const RealMatrix& X, const RealMatrix& Y, const RealVector& s,
                               const CharFn& ancilla, double tol = 1e-9);

CharFn apply_dilation_char(const GaussianDilation& d, const CharFn& chi_in);

/// Needs J(X) invertible; throws SingularJ otherwise.
GaussianDilation exact_dilation(const LinearBosonicChannel& ch, const DilationOptions& options = {});

/// Exact dilation of (X_eps, f g_eps) with X_eps = (1 - eps) X and
/// g_eps(xi) = exp(-v_eps/4 xi^T xi), v_eps = ||X_eps^T Omega X_eps - X^T Omega X||_2.
GaussianDilation approx_var_unitary(const LinearBosonicChannel& ch, double epsilon,
                                    const DilationOptions& options = {});

/// Channel whose exact dilation approx_var_unitary returns at epsilon.
LinearBosonicChannel var_unitary_channel(const LinearBosonicChannel& ch, double epsilon);

/// Fixed unitary on n + k ancilla modes; induced action
/// chi(X xi) f(xi) exp(-(eps/4) xi^T Q xi).
GaussianDilation approx_fixed_unitary(const LinearBosonicChannel& ch, double epsilon,
                                      const DilationOptions& options = {});

struct DilationReport {
  double xy_residual = 0.0;
  double symplectic_residual = 0.0;
  bool columns_match = false;
  BochnerReport ancilla;
  // Fixed-unitary invariants; zero when not applicable.
  double penrose_residual = 0.0;
  double sandwich_residual = 0.0;
  double wg_min_eig = 0.0;
  double min_nonzero_pair = 0.0;

  std::vector<std::string> failures;
  std::vector<std::string> warnings;

  bool pass() const { return failures.empty(); }
};

DilationReport check_dilation(const GaussianDilation& d, const Sampler& sampler = {},
                              const Tolerances& tol = {});

struct TruncatedAncilla {
  GaussianDilation dilation;
  FockOperator state;        // renormalized projection onto the cutoff
  double captured_trace = 0.0;
  double delta = 0.0;        // 1 - captured_trace
};

/// Projects the ancilla state onto `cutoff` photons per mode. Throws
/// CutoffTooSmall when less than half of the trace is captured.
TruncatedAncilla truncate_ancilla(const GaussianDilation& d, int cutoff,
                                  const QuadratureGrid& grid);

}  // namespace bosonic

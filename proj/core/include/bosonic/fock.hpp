#pragma once

#include "bosonic/char_fn.hpp"
#include "bosonic/types.hpp"

#include <cstddef>
#include <vector>

namespace bosonic {

struct GaussianDilation;

/// Dense operator on n modes truncated at `cutoff` photons per mode
/// (cutoff^n basis states). Mode 0 is the most significant tensor index.
struct FockOperator {
  int n = 0;
  int cutoff = 0;
  ComplexMatrix matrix;

  Eigen::Index dim() const { return matrix.rows(); }
  cplx trace() const { return matrix.trace(); }
  double hermitian_defect() const;
  bool is_hermitian(double tol = 1e-9) const { return hermitian_defect() <= tol; }

  static FockOperator zero(int n, int cutoff);
  static FockOperator projector(int n, int cutoff, const std::vector<int>& photons);
};

/// Hilbert dimension cutoff^modes; throws InvalidArgument on overflow or
/// nonpositive arguments.
std::size_t fock_dimension(int modes, int cutoff);

/// Flat index of an occupation pattern.
std::size_t fock_index(const std::vector<int>& photons, int cutoff);

/// Midpoint quadrature on [-R, R]^{2n} with spacing h.
struct QuadratureGrid {
  double radius = 8.0;
  double step = 0.05;

  int points_per_axis() const;
  void validate() const;

  /// R = 8, h = 0.05 for one mode; R = 6, h = 0.1 otherwise.
  static QuadratureGrid defaults(int n);
};

/// Single-mode matrix of D(xi) for xi = (x, p). Entries are exact matrix
/// elements of the infinite operator restricted to the truncated basis.
ComplexMatrix displacement_matrix_1mode(double x, double p, int cutoff);

FockOperator displacement_op(const PhasePoint& xi, int cutoff);

/// Tr[T D(xi)].
cplx char_of_operator(const FockOperator& T, const PhasePoint& xi);

struct ReconstructionOptions {
  /// Throw GridTooCoarse when |Tr T - chi(0)| exceeds trace_tol.
  bool check_trace = true;
  double trace_tol = 0.05;
  /// Upper bound on grid points times matrix entries for terms that do
  /// not factor across modes.
  double work_budget = 4e9;
};

/// Riemann-sum inversion T = int d^{2n}xi / (2 pi)^n chi(xi) D(-xi),
/// Hermitized. chi is expanded into Gaussian terms; terms that factor
/// across modes are integrated one mode at a time on a grid stretched
/// along the slowly decaying directions.
FockOperator operator_from_char(const CharFn& chi, const QuadratureGrid& grid, int cutoff,
                                const ReconstructionOptions& options = {});

struct ParsevalReport {
  cplx operator_side{0.0, 0.0};  // Tr[T1^dagger T2]
  cplx phase_space_side{0.0, 0.0};
  double difference = 0.0;
};

ParsevalReport parseval(const FockOperator& T1, const FockOperator& T2, const QuadratureGrid& grid);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const FockOperator& rho, const FockOperator& sigma);

double purity(const FockOperator& rho);

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const FockOperator& rho);

FockOperator gaussian_state_fock(const RealMatrix& V, const RealVector& s, int cutoff,
                                 const QuadratureGrid& grid);

/// |psi><psi| for a truncated coherent state D(s)|0>, renormalized.
FockOperator coherent_state_fock(const RealVector& s, int cutoff);

/// Tensor product, first argument on the leading modes.
FockOperator tensor(const FockOperator& a, const FockOperator& b);

struct StinespringOptions {
  int cutoff = 15;
  QuadratureGrid grid = QuadratureGrid::defaults(1);
  /// Ceiling on cutoff^(n + m).
  std::size_t max_dimension = 4096;
  /// Spectral weights of rho (x) sigma below this are dropped.
  double weight_floor = 1e-12;
};

struct StinespringResult {
  FockOperator output;
  FockOperator ancilla;
  double ancilla_captured_trace = 0.0;
  double output_trace = 0.0;  // before renormalization; leakage = 1 - output_trace
  double unitarity_defect = 0.0;
  int terms = 0;
};

/// Tr_E[U (rho (x) sigma) U^dagger] with U the Gaussian unitary of the
/// completion S and sigma the ancilla reconstructed at the cutoff.
StinespringResult stinespring_apply(const GaussianDilation& d, const FockOperator& rho,
                                    const StinespringOptions& options = {});

struct StrictBoundProbe {
  double value = 0.0;  // |chi_sigma(zeta)|
  bool violation = false;
  bool near_boundary = false;
};

StrictBoundProbe chi_strict_bound_probe(const FockOperator& sigma, const PhasePoint& zeta);

}  // namespace bosonic

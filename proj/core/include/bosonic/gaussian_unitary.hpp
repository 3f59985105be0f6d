#pragma once

#include "bosonic/fock.hpp"
#include "bosonic/phase_space.hpp"
#include "bosonic/types.hpp"

#include <cstddef>
#include <vector>

namespace bosonic {

/// Truncated Fock representation of the Gaussian unitary U_S with
/// U^dagger D(zeta) U = D(S zeta), kept in factored form
/// U_S = U_{O2} U_Z U_{O1} for S = O1 Z O2. Each factor is the exponential
/// of its quadratic Hamiltonian restricted to the truncated space: passive
/// factors block-wise by total photon number, squeezers mode by mode.
class GaussianUnitary {
 public:
  GaussianUnitary(const RealMatrix& S, int cutoff, double tol = 1e-9);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dim() const { return dim_; }
  const EulerDecomposition& euler() const { return euler_; }

  /// U psi.
  ComplexVector apply(const ComplexVector& psi) const;
  /// U^dagger psi.
  ComplexVector apply_adjoint(const ComplexVector& psi) const;

  ComplexMatrix dense() const;

 private:
  struct Passive {
    // One unitary per total-photon-number block, acting on the listed indices.
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<ComplexMatrix> unitaries;
    bool identity = true;
  };
  struct Squeeze {
    std::vector<ComplexMatrix> per_mode;  // empty matrix means identity
  };

  Passive make_passive(const RealMatrix& O) const;
  Squeeze make_squeeze(const RealVector& r) const;
  void apply_passive(const Passive& P, ComplexVector& psi, bool adjoint) const;
  void apply_squeeze(const Squeeze& Z, ComplexVector& psi, bool adjoint) const;

  int modes_;
  int cutoff_;
  std::size_t dim_;
  EulerDecomposition euler_;
  Passive o1_;  // acts first on a state vector
  Squeeze z_;
  Passive o2_;
};

/// Dense U_S with a total dimension guard (ModeCountGuard) and a
/// symplecticity check (NonSymplectic).
struct GaussianUnitaryResult {
  FockOperator unitary;
  double unitarity_defect = 0.0;  // max |U^dagger U - I|
};

GaussianUnitaryResult gaussian_unitary_fock(const RealMatrix& S, int cutoff,
                                            std::size_t max_dimension = 1024);

/// log of a real orthogonal symplectic matrix through its unitary image.
RealMatrix log_orthogonal_symplectic(const RealMatrix& O);

}  // namespace bosonic

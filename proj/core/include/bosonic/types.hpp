#pragma once

#include <Eigen/Dense>

#include <complex>

namespace bosonic {

using cplx = std::complex<double>;

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Argument of characteristic functions: (x_1, p_1, ..., x_n, p_n).
using PhasePoint = Eigen::VectorXd;

struct Tolerances {
  double structural = 1e-9;  // matrix identities (XY, symplecticity, Penrose)
  double eigen = 1e-8;       // eigenvalue nonnegativity
  double rank = 1e-10;       // canonical pair magnitude counted as zero
  double conditioning = 1e-6;  // pair magnitudes below this trigger a warning
};

}  // namespace bosonic

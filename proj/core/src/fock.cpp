#include "bosonic/fock.hpp"

#include "bosonic/dilation.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/gaussian_unitary.hpp"
#include "bosonic/parallel.hpp"
#include "bosonic/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bosonic {

double FockOperator::hermitian_defect() const {
  return matrix.size() ? (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() : 0.0;
}

FockOperator FockOperator::zero(int n, int cutoff) {
  const auto dim = static_cast<Eigen::Index>(fock_dimension(n, cutoff));
  return FockOperator{n, cutoff, ComplexMatrix::Zero(dim, dim)};
}

FockOperator FockOperator::projector(int n, int cutoff, const std::vector<int>& photons) {
  if (static_cast<int>(photons.size()) != n) {
    throw DimensionMismatch("FockOperator::projector: need one occupation per mode");
  }
  FockOperator op = zero(n, cutoff);
  const auto i = static_cast<Eigen::Index>(fock_index(photons, cutoff));
  op.matrix(i, i) = 1.0;
  return op;
}

std::size_t fock_dimension(int modes, int cutoff) {
  if (modes < 0 || cutoff < 1) throw InvalidArgument("fock_dimension: bad modes or cutoff");
  std::size_t dim = 1;
  for (int j = 0; j < modes; ++j) {
    if (dim > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(cutoff)) {
      throw InvalidArgument("fock_dimension: overflow");
    }
    dim *= static_cast<std::size_t>(cutoff);
  }
  return dim;
}

std::size_t fock_index(const std::vector<int>& photons, int cutoff) {
  std::size_t idx = 0;
  for (int k : photons) {
    if (k < 0 || k >= cutoff) throw InvalidArgument("fock_index: occupation outside cutoff");
    idx = idx * static_cast<std::size_t>(cutoff) + static_cast<std::size_t>(k);
  }
  return idx;
}

int QuadratureGrid::points_per_axis() const {
  validate();
  return static_cast<int>(std::lround(2.0 * radius / step));
}

void QuadratureGrid::validate() const {
  if (!(radius > 0.0) || !(step > 0.0)) {
    throw InvalidArgument("QuadratureGrid: radius and step must be positive");
  }
  const double ratio = radius / step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("QuadratureGrid: radius must be an integer multiple of step");
  }
}

QuadratureGrid QuadratureGrid::defaults(int n) {
  return n <= 1 ? QuadratureGrid{8.0, 0.05} : QuadratureGrid{6.0, 0.1};
}

ComplexMatrix displacement_matrix_1mode(double x, double p, int cutoff) {
  if (cutoff < 1) throw InvalidArgument("displacement_matrix_1mode: cutoff must be positive");
  // D(xi) = exp(alpha a^dag - alpha^* a) with alpha = -(x + i p)/sqrt(2).
  const cplx alpha = -cplx{x, p} / std::numbers::sqrt2;
  const cplx minus_conj = -std::conj(alpha);
  ComplexMatrix D(cutoff, cutoff);
  D(0, 0) = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < cutoff; ++k) D(0, k) = D(0, k - 1) * minus_conj / std::sqrt(double(k));
  // a D = D (a + alpha) gives the row recurrence.
  for (int m = 0; m + 1 < cutoff; ++m) {
    const double inv = 1.0 / std::sqrt(double(m + 1));
    D(m + 1, 0) = alpha * D(m, 0) * inv;
    for (int k = 1; k < cutoff; ++k) {
      D(m + 1, k) = (std::sqrt(double(k)) * D(m, k - 1) + alpha * D(m, k)) * inv;
    }
  }
  return D;
}

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

void require_cutoff(int cutoff, const char* what) {
  if (cutoff < 1) throw InvalidArgument(std::string(what) + ": cutoff must be positive");
}

}  // namespace

FockOperator displacement_op(const PhasePoint& xi, int cutoff) {
  require_cutoff(cutoff, "displacement_op");
  if (xi.size() % 2 != 0) throw DimensionMismatch("displacement_op: odd phase-space dimension");
  const int n = static_cast<int>(xi.size() / 2);
  ComplexMatrix D = ComplexMatrix::Ones(1, 1);
  for (int j = 0; j < n; ++j) D = kron(D, displacement_matrix_1mode(xi(2 * j), xi(2 * j + 1), cutoff));
  return FockOperator{n, cutoff, std::move(D)};
}

cplx char_of_operator(const FockOperator& T, const PhasePoint& xi) {
  if (xi.size() != 2 * T.n) {
    throw DimensionMismatch("char_of_operator: point has size " + std::to_string(xi.size()) +
                            " for an operator on " + std::to_string(T.n) + " modes");
  }
  const FockOperator D = displacement_op(xi, T.cutoff);
  return T.matrix.cwiseProduct(D.matrix.transpose()).sum();
}

namespace {

constexpr double kEigenFloor = 1e-4;
constexpr double kNegligible = 1e-18;

// Maps grid coordinates u to xi = L u, widening directions where the
// Gaussian decays slower than exp(-xi^2/4) so R still covers its support.
RealMatrix stretch_map(const RealMatrix& M) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (M + M.transpose()));
  RealVector scale(M.rows());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    const double w = std::max(es.eigenvalues()(i), kEigenFloor);
    scale(i) = 1.0 / std::sqrt(std::min(w, 1.0));
  }
  return es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().transpose();
}

bool separable(const RealMatrix& M) {
  const double scale = std::max(1.0, M.size() ? M.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (i / 2 != j / 2 && std::abs(M(i, j)) > 1e-14 * scale) return false;
  return true;
}

// (1/2pi) sum_grid |det L| h^2 exp(-xi^T M xi / 4 + i b^T xi) D(-xi), xi = L u.
ComplexMatrix mode_integral(const RealMatrix& M, const RealVector& b, const QuadratureGrid& grid,
                            int cutoff) {
  const int count = grid.points_per_axis();
  const double h = grid.step;
  const RealMatrix L = stretch_map(M);
  const double jac = std::abs(L.determinant());
  std::vector<ComplexMatrix> rows(static_cast<std::size_t>(count));
  parallel_for(rows.size(), [&](std::size_t i) {
    ComplexMatrix acc = ComplexMatrix::Zero(cutoff, cutoff);
    const double u1 = -grid.radius + (double(i) + 0.5) * h;
    for (int j = 0; j < count; ++j) {
      const double u2 = -grid.radius + (double(j) + 0.5) * h;
      const double x = L(0, 0) * u1 + L(0, 1) * u2;
      const double p = L(1, 0) * u1 + L(1, 1) * u2;
      const double quad = x * (M(0, 0) * x + M(0, 1) * p) + p * (M(1, 0) * x + M(1, 1) * p);
      const double decay = std::exp(-0.25 * quad);
      if (decay < kNegligible) continue;
      const cplx w = decay * std::exp(cplx{0.0, b(0) * x + b(1) * p});
      acc.noalias() += w * displacement_matrix_1mode(-x, -p, cutoff);
    }
    rows[i] = std::move(acc);
  });
  ComplexMatrix total = ComplexMatrix::Zero(cutoff, cutoff);
  for (const ComplexMatrix& r : rows) total += r;
  return total * (jac * h * h / (2.0 * std::numbers::pi));
}

// Fallback for terms coupling modes: a joint grid over all 2n coordinates.
ComplexMatrix joint_integral(const GaussianTerm& t, const QuadratureGrid& grid, int cutoff,
                             double budget) {
  const auto dim2 = t.M.rows();
  const int n = static_cast<int>(dim2 / 2);
  const int count = grid.points_per_axis();
  const double points = std::pow(double(count), double(dim2));
  const double entries = std::pow(double(cutoff), 2.0 * n);
  if (points * entries > budget) {
    std::ostringstream msg;
    msg << "reconstruction of a term coupling " << n << " modes needs " << points
        << " grid points at " << entries << " entries each; coarsen the grid or lower the cutoff";
    throw ModeCountGuard(msg.str());
  }
  const RealMatrix L = stretch_map(t.M);
  const double jac = std::abs(L.determinant());
  const auto total_points = static_cast<std::size_t>(points);
  const auto outer = static_cast<std::size_t>(count);
  const std::size_t inner = total_points / outer;
  const auto dim = static_cast<Eigen::Index>(fock_dimension(n, cutoff));
  std::vector<ComplexMatrix> partial(outer);
  parallel_for(outer, [&](std::size_t i0) {
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    RealVector u(dim2);
    for (std::size_t rest = 0; rest < inner; ++rest) {
      std::size_t code = rest;
      u(0) = -grid.radius + (double(i0) + 0.5) * grid.step;
      for (Eigen::Index a = dim2 - 1; a >= 1; --a) {
        u(a) = -grid.radius + (double(code % outer) + 0.5) * grid.step;
        code /= outer;
      }
      const RealVector xi = L * u;
      const double decay = std::exp(-0.25 * xi.dot(t.M * xi));
      if (decay < kNegligible) continue;
      const cplx w = decay * std::exp(cplx{0.0, t.b.dot(xi)});
      acc.noalias() += w * displacement_op(-xi, cutoff).matrix;
    }
    partial[i0] = std::move(acc);
  });
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (const ComplexMatrix& p : partial) total += p;
  return total * (jac * std::pow(grid.step, double(dim2)) / std::pow(2.0 * std::numbers::pi, n));
}

struct ModeKey {
  RealMatrix M;
  RealVector b;
};

}  // namespace

FockOperator operator_from_char(const CharFn& chi, const QuadratureGrid& grid, int cutoff,
                                const ReconstructionOptions& options) {
  require_cutoff(cutoff, "operator_from_char");
  grid.validate();
  const int n = chi.modes();
  FockOperator out = FockOperator::zero(n, cutoff);
  if (n == 0) {
    out.matrix(0, 0) = chi(PhasePoint::Zero(0));
    return out;
  }

  // Per-mode integrals are shared between terms that differ elsewhere.
  std::vector<ModeKey> keys;
  std::vector<ComplexMatrix> cache;
  auto mode_op = [&](const RealMatrix& M, const RealVector& b) -> const ComplexMatrix& {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (keys[i].M == M && keys[i].b == b) return cache[i];
    }
    keys.push_back({M, b});
    cache.push_back(mode_integral(M, b, grid, cutoff));
    return cache.back();
  };

  for (const GaussianTerm& t : gaussian_terms(chi)) {
    if (separable(t.M)) {
      ComplexMatrix term = ComplexMatrix::Ones(1, 1);
      for (int j = 0; j < n; ++j) {
        const RealMatrix Mj = t.M.block(2 * j, 2 * j, 2, 2);
        const RealVector bj = t.b.segment(2 * j, 2);
        term = kron(term, mode_op(Mj, bj));
      }
      out.matrix += t.coef * term;
    } else {
      out.matrix += t.coef * joint_integral(t, grid, cutoff, options.work_budget);
    }
  }
  out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();

  if (options.check_trace) {
    const cplx expected = chi(PhasePoint::Zero(chi.arity()));
    const double gap = std::abs(out.trace() - expected);
    if (gap > options.trace_tol) {
      std::ostringstream msg;
      msg << "reconstructed trace " << out.trace().real() << " differs from chi(0) by " << gap
          << "; refine the grid or raise the cutoff";
      throw GridTooCoarse(msg.str());
    }
  }
  return out;
}

ParsevalReport parseval(const FockOperator& T1, const FockOperator& T2, const QuadratureGrid& grid) {
  if (T1.n != T2.n || T1.cutoff != T2.cutoff) {
    throw DimensionMismatch("parseval: operators live on different spaces");
  }
  grid.validate();
  ParsevalReport r;
  r.operator_side = (T1.matrix.adjoint() * T2.matrix).trace();
  const int n = T1.n;
  const int count = grid.points_per_axis();
  const double points = std::pow(double(count), 2.0 * n);
  if (points > 5e7) throw ModeCountGuard("parseval: grid too large for " + std::to_string(n) + " modes");
  const auto outer = static_cast<std::size_t>(count);
  const std::size_t inner = static_cast<std::size_t>(points) / outer;
  std::vector<cplx> partial(outer);
  parallel_for(outer, [&](std::size_t i0) {
    cplx acc{0.0, 0.0};
    PhasePoint xi(2 * n);
    for (std::size_t rest = 0; rest < inner; ++rest) {
      std::size_t code = rest;
      xi(0) = -grid.radius + (double(i0) + 0.5) * grid.step;
      for (int a = 2 * n - 1; a >= 1; --a) {
        xi(a) = -grid.radius + (double(code % outer) + 0.5) * grid.step;
        code /= outer;
      }
      const ComplexMatrix D = displacement_op(xi, T1.cutoff).matrix;
      const cplx c1 = T1.matrix.cwiseProduct(D.transpose()).sum();
      const cplx c2 = T2.matrix.cwiseProduct(D.transpose()).sum();
      acc += std::conj(c1) * c2;
    }
    partial[i0] = acc;
  });
  cplx total{0.0, 0.0};
  for (const cplx& p : partial) total += p;
  r.phase_space_side = total * std::pow(grid.step, 2.0 * n) / std::pow(2.0 * std::numbers::pi, n);
  r.difference = std::abs(r.operator_side - r.phase_space_side);
  return r;
}

double trace_distance(const FockOperator& rho, const FockOperator& sigma) {
  if (rho.matrix.rows() != sigma.matrix.rows()) {
    throw DimensionMismatch("trace_distance: dimension mismatch");
  }
  const ComplexMatrix diff = rho.matrix - sigma.matrix;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (diff + diff.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double purity(const FockOperator& rho) { return (rho.matrix * rho.matrix).trace().real(); }

double min_eigenvalue(const FockOperator& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho.matrix + rho.matrix.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

FockOperator gaussian_state_fock(const RealMatrix& V, const RealVector& s, int cutoff,
                                 const QuadratureGrid& grid) {
  const EigenCheck physical = heisenberg_check(V);
  if (!physical.pass) {
    throw UnphysicalCovariance("V + i Omega has eigenvalue " + std::to_string(physical.min_eig));
  }
  return operator_from_char(CharFn::gaussian_state(V, s), grid, cutoff);
}

FockOperator coherent_state_fock(const RealVector& s, int cutoff) {
  require_cutoff(cutoff, "coherent_state_fock");
  if (s.size() % 2 != 0) throw DimensionMismatch("coherent_state_fock: odd dimension");
  ComplexVector psi = ComplexVector::Ones(1);
  for (Eigen::Index j = 0; j < s.size() / 2; ++j) {
    psi = kron(psi, ComplexVector(displacement_matrix_1mode(s(2 * j), s(2 * j + 1), cutoff).col(0)));
  }
  psi.normalize();
  return FockOperator{static_cast<int>(s.size() / 2), cutoff, psi * psi.adjoint()};
}

FockOperator tensor(const FockOperator& a, const FockOperator& b) {
  if (a.cutoff != b.cutoff && a.n > 0 && b.n > 0) {
    throw DimensionMismatch("tensor: cutoffs differ");
  }
  return FockOperator{a.n + b.n, a.n > 0 ? a.cutoff : b.cutoff, kron(a.matrix, b.matrix)};
}

StinespringResult stinespring_apply(const GaussianDilation& d, const FockOperator& rho,
                                    const StinespringOptions& options) {
  if (rho.n != d.n) throw DimensionMismatch("stinespring_apply: state has the wrong mode count");
  if (rho.cutoff != options.cutoff) {
    throw DimensionMismatch("stinespring_apply: state cutoff differs from the simulation cutoff");
  }
  const std::size_t total = fock_dimension(d.n + d.m, options.cutoff);
  if (total > options.max_dimension) {
    std::ostringstream msg;
    msg << "Stinespring simulation on " << d.n + d.m << " modes at cutoff " << options.cutoff
        << " needs dimension " << total << " > " << options.max_dimension;
    throw ModeCountGuard(msg.str());
  }

  StinespringResult res;
  const TruncatedAncilla anc = truncate_ancilla(d, options.cutoff, options.grid);
  res.ancilla = anc.state;
  res.ancilla_captured_trace = anc.captured_trace;

  const GaussianUnitary U(d.completion.S, options.cutoff);
  const auto dim_sys = rho.matrix.rows();
  const auto dim_env = res.ancilla.matrix.rows();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es_rho(0.5 * (rho.matrix + rho.matrix.adjoint()));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es_env(
      0.5 * (res.ancilla.matrix + res.ancilla.matrix.adjoint()));

  ComplexMatrix out = ComplexMatrix::Zero(dim_sys, dim_sys);
  for (Eigen::Index i = dim_sys - 1; i >= 0; --i) {
    const double p = es_rho.eigenvalues()(i);
    if (p <= options.weight_floor) continue;
    for (Eigen::Index j = dim_env - 1; j >= 0; --j) {
      const double q = es_env.eigenvalues()(j);
      if (p * q <= options.weight_floor) continue;
      const ComplexVector psi = kron(ComplexVector(es_rho.eigenvectors().col(i)),
                                     ComplexVector(es_env.eigenvectors().col(j)));
      const ComplexVector phi = U.apply(psi);
      res.unitarity_defect =
          std::max(res.unitarity_defect, (U.apply_adjoint(phi) - psi).cwiseAbs().maxCoeff());
      // Row index runs over the system, column index over the ancilla.
      const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
          Phi(phi.data(), dim_sys, dim_env);
      out.noalias() += (p * q) * (Phi * Phi.adjoint());
      ++res.terms;
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  res.output = FockOperator{d.n, options.cutoff, std::move(out)};
  res.output_trace = res.output.trace().real();
  return res;
}

StrictBoundProbe chi_strict_bound_probe(const FockOperator& sigma, const PhasePoint& zeta) {
  if (zeta.isZero(0.0)) throw InvalidArgument("chi_strict_bound_probe: zeta must be nonzero");
  StrictBoundProbe probe;
  probe.value = std::abs(char_of_operator(sigma, zeta));
  probe.violation = probe.value >= 1.0 - 1e-9;
  probe.near_boundary = probe.value >= 1.0 - 1e-3;
  return probe;
}

}  // namespace bosonic

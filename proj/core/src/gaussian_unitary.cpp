#include "bosonic/gaussian_unitary.hpp"

#include "bosonic/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace bosonic {

namespace {

// r = T c with c = (a_1, a_1^dag, a_2, a_2^dag, ...).
ComplexMatrix quadrature_to_ladder(int modes) {
  const double h = 1.0 / std::numbers::sqrt2;
  ComplexMatrix T = ComplexMatrix::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    T(2 * j, 2 * j) = h;
    T(2 * j, 2 * j + 1) = h;
    T(2 * j + 1, 2 * j) = cplx{0.0, -h};
    T(2 * j + 1, 2 * j + 1) = cplx{0.0, h};
  }
  return T;
}

// Coefficients of H = 1/2 r^T G r in ladder form: c^T M c / 2 with M = T^T G T.
ComplexMatrix ladder_form(const RealMatrix& G) {
  const ComplexMatrix T = quadrature_to_ladder(static_cast<int>(G.rows() / 2));
  return T.transpose() * G.cast<cplx>() * T;
}

ComplexMatrix exp_minus_i(const ComplexMatrix& H) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (H + H.adjoint()));
  ComplexVector phases(H.rows());
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    phases(i) = std::exp(cplx{0.0, -es.eigenvalues()(i)});
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<int> occupations(std::size_t index, int modes, int cutoff) {
  std::vector<int> occ(static_cast<std::size_t>(modes));
  for (int j = modes - 1; j >= 0; --j) {
    occ[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::size_t>(cutoff));
    index /= static_cast<std::size_t>(cutoff);
  }
  return occ;
}

}  // namespace

RealMatrix log_orthogonal_symplectic(const RealMatrix& O) {
  const auto n = O.rows() / 2;
  ComplexMatrix u(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) u(j, k) = cplx{O(2 * j, 2 * k), O(2 * j + 1, 2 * k)};
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  const ComplexMatrix& Tri = schur.matrixT();
  ComplexVector logs(n);
  for (Eigen::Index i = 0; i < n; ++i) logs(i) = cplx{0.0, std::arg(Tri(i, i))};
  const ComplexMatrix L = schur.matrixU() * logs.asDiagonal() * schur.matrixU().adjoint();
  RealMatrix R(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      R(2 * j, 2 * k) = L(j, k).real();
      R(2 * j + 1, 2 * k) = L(j, k).imag();
      R(2 * j, 2 * k + 1) = -L(j, k).imag();
      R(2 * j + 1, 2 * k + 1) = L(j, k).real();
    }
  }
  return R;
}

GaussianUnitary::GaussianUnitary(const RealMatrix& S, int cutoff, double tol)
    : modes_(static_cast<int>(S.rows() / 2)), cutoff_(cutoff), dim_(0) {
  if (S.rows() != S.cols() || S.rows() % 2 != 0) {
    throw DimensionMismatch("GaussianUnitary: S must be 2n x 2n");
  }
  if (cutoff < 1) throw InvalidArgument("GaussianUnitary: cutoff must be positive");
  const double scale = std::max(1.0, S.squaredNorm() / std::max<double>(1.0, double(S.rows())));
  const double residual = S.size() ? symplectic_residual(S) : 0.0;
  if (residual > tol * scale) {
    throw NonSymplectic("S^T Omega S deviates from Omega by " + std::to_string(residual));
  }
  dim_ = fock_dimension(modes_, cutoff_);
  if (modes_ == 0) return;
  euler_ = euler_decompose(S, tol);
  o1_ = make_passive(euler_.O1);
  z_ = make_squeeze(euler_.squeezing);
  o2_ = make_passive(euler_.O2);
}

GaussianUnitary::Passive GaussianUnitary::make_passive(const RealMatrix& O) const {
  Passive P;
  const RealMatrix I = RealMatrix::Identity(O.rows(), O.cols());
  if ((O - I).cwiseAbs().maxCoeff() <= 1e-15) return P;
  P.identity = false;

  // U_O = exp(-iH), H = 1/2 r^T G r, G = Omega log O; only a^dag a terms survive.
  const RealMatrix G = omega(modes_) * log_orthogonal_symplectic(O);
  const ComplexMatrix M = ladder_form(0.5 * (G + G.transpose()));
  ComplexMatrix h(modes_, modes_);
  for (int j = 0; j < modes_; ++j)
    for (int k = 0; k < modes_; ++k) h(j, k) = M(2 * j + 1, 2 * k);

  std::vector<std::vector<std::size_t>> by_total(static_cast<std::size_t>(modes_ * (cutoff_ - 1) + 1));
  for (std::size_t i = 0; i < dim_; ++i) {
    int total = 0;
    for (int v : occupations(i, modes_, cutoff_)) total += v;
    by_total[static_cast<std::size_t>(total)].push_back(i);
  }
  const auto stride = [&](int j) {
    std::size_t s = 1;
    for (int t = j + 1; t < modes_; ++t) s *= static_cast<std::size_t>(cutoff_);
    return s;
  };
  for (const auto& block : by_total) {
    const auto size = static_cast<Eigen::Index>(block.size());
    std::unordered_map<std::size_t, Eigen::Index> position;
    for (Eigen::Index i = 0; i < size; ++i) position[block[static_cast<std::size_t>(i)]] = i;
    ComplexMatrix H = ComplexMatrix::Zero(size, size);
    for (Eigen::Index col = 0; col < size; ++col) {
      const std::size_t idx = block[static_cast<std::size_t>(col)];
      const std::vector<int> occ = occupations(idx, modes_, cutoff_);
      for (int k = 0; k < modes_; ++k) {
        if (occ[static_cast<std::size_t>(k)] == 0) continue;
        const double ak = std::sqrt(double(occ[static_cast<std::size_t>(k)]));
        for (int j = 0; j < modes_; ++j) {
          if (h(j, k) == cplx{0.0, 0.0}) continue;
          const int nj = occ[static_cast<std::size_t>(j)] - (j == k ? 1 : 0);
          if (nj + 1 >= cutoff_) continue;  // leaves the truncated space
          const double adj = std::sqrt(double(nj + 1));
          const std::size_t target = idx - stride(k) + stride(j);
          H(position.at(target), col) += h(j, k) * ak * adj;
        }
      }
    }
    P.blocks.push_back(block);
    P.unitaries.push_back(exp_minus_i(H));
  }
  return P;
}

GaussianUnitary::Squeeze GaussianUnitary::make_squeeze(const RealVector& r) const {
  Squeeze Z;
  Z.per_mode.resize(static_cast<std::size_t>(modes_));
  ComplexMatrix a = ComplexMatrix::Zero(cutoff_, cutoff_);
  for (int k = 1; k < cutoff_; ++k) a(k - 1, k) = std::sqrt(double(k));
  const ComplexMatrix ad = a.adjoint();
  for (int j = 0; j < modes_ && j < r.size(); ++j) {
    if (std::abs(r(j)) <= 1e-15) continue;
    // diag(e^r, e^-r) = exp(diag(r, -r)); G = Omega diag(r, -r).
    RealMatrix logZ = RealMatrix::Zero(2, 2);
    logZ(0, 0) = r(j);
    logZ(1, 1) = -r(j);
    const RealMatrix G = omega(1) * logZ;
    const ComplexMatrix M = ladder_form(0.5 * (G + G.transpose()));
    const ComplexMatrix H = 0.5 * M(0, 0) * a * a + 0.5 * M(1, 1) * ad * ad + M(1, 0) * ad * a;
    Z.per_mode[static_cast<std::size_t>(j)] = exp_minus_i(H);
  }
  return Z;
}

void GaussianUnitary::apply_passive(const Passive& P, ComplexVector& psi, bool adjoint) const {
  if (P.identity) return;
  for (std::size_t b = 0; b < P.blocks.size(); ++b) {
    const auto& idx = P.blocks[b];
    ComplexVector x(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) x(static_cast<Eigen::Index>(i)) = psi(static_cast<Eigen::Index>(idx[i]));
    const ComplexVector y = adjoint ? ComplexVector(P.unitaries[b].adjoint() * x)
                                    : ComplexVector(P.unitaries[b] * x);
    for (std::size_t i = 0; i < idx.size(); ++i) psi(static_cast<Eigen::Index>(idx[i])) = y(static_cast<Eigen::Index>(i));
  }
}

void GaussianUnitary::apply_squeeze(const Squeeze& Z, ComplexVector& psi, bool adjoint) const {
  const auto d = static_cast<std::size_t>(cutoff_);
  for (int j = 0; j < modes_; ++j) {
    const ComplexMatrix& U = Z.per_mode[static_cast<std::size_t>(j)];
    if (U.size() == 0) continue;
    const ComplexMatrix A = adjoint ? ComplexMatrix(U.adjoint()) : U;
    std::size_t inner = 1;
    for (int t = j + 1; t < modes_; ++t) inner *= d;
    const std::size_t outer = dim_ / (inner * d);
    ComplexVector x(cutoff_);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t base = o * d * inner + i;
        for (std::size_t k = 0; k < d; ++k) x(static_cast<Eigen::Index>(k)) = psi(static_cast<Eigen::Index>(base + k * inner));
        const ComplexVector y = A * x;
        for (std::size_t k = 0; k < d; ++k) psi(static_cast<Eigen::Index>(base + k * inner)) = y(static_cast<Eigen::Index>(k));
      }
    }
  }
}

ComplexVector GaussianUnitary::apply(const ComplexVector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != dim_) {
    throw DimensionMismatch("GaussianUnitary::apply: vector has the wrong dimension");
  }
  ComplexVector out = psi;
  if (modes_ == 0) return out;
  apply_passive(o1_, out, false);
  apply_squeeze(z_, out, false);
  apply_passive(o2_, out, false);
  return out;
}

ComplexVector GaussianUnitary::apply_adjoint(const ComplexVector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != dim_) {
    throw DimensionMismatch("GaussianUnitary::apply_adjoint: vector has the wrong dimension");
  }
  ComplexVector out = psi;
  if (modes_ == 0) return out;
  apply_passive(o2_, out, true);
  apply_squeeze(z_, out, true);
  apply_passive(o1_, out, true);
  return out;
}

ComplexMatrix GaussianUnitary::dense() const {
  const auto dim = static_cast<Eigen::Index>(dim_);
  ComplexMatrix U(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(c) = 1.0;
    U.col(c) = apply(e);
  }
  return U;
}

GaussianUnitaryResult gaussian_unitary_fock(const RealMatrix& S, int cutoff,
                                            std::size_t max_dimension) {
  if (S.rows() % 2 != 0) throw DimensionMismatch("gaussian_unitary_fock: odd dimension");
  const int modes = static_cast<int>(S.rows() / 2);
  const std::size_t dim = fock_dimension(modes, cutoff);
  if (dim > max_dimension) {
    std::ostringstream msg;
    msg << "dense Gaussian unitary on " << modes << " modes at cutoff " << cutoff
        << " has dimension " << dim << " > " << max_dimension;
    throw ModeCountGuard(msg.str());
  }
  const GaussianUnitary U(S, cutoff);
  GaussianUnitaryResult res;
  res.unitary = FockOperator{modes, cutoff, U.dense()};
  const auto n = res.unitary.matrix.rows();
  res.unitarity_defect =
      (res.unitary.matrix.adjoint() * res.unitary.matrix - ComplexMatrix::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  return res;
}

}  // namespace bosonic

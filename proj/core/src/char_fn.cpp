#include "bosonic/char_fn.hpp"

#include "bosonic/errors.hpp"
#include "bosonic/phase_space.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace bosonic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_even(Eigen::Index dim, const char* what) {
  if (dim < 0 || dim % 2 != 0) {
    throw DimensionMismatch(std::string(what) + ": phase-space dimension must be even, got " +
                            std::to_string(dim));
  }
}

}  // namespace

CharFn::CharFn(std::shared_ptr<const CharNode> node, int arity)
    : node_(std::move(node)), arity_(arity) {}

CharFn CharFn::one(int dim) {
  require_even(dim, "CharFn::one");
  return CharFn(std::make_shared<const CharNode>(node::One{dim}), dim);
}

CharFn CharFn::gaussian_kernel(RealMatrix M, RealVector b) {
  require_even(M.rows(), "CharFn::gaussian_kernel");
  if (M.rows() != M.cols() || b.size() != M.rows()) {
    throw DimensionMismatch("CharFn::gaussian_kernel: M must be square and match b");
  }
  const double scale = std::max(1.0, M.size() ? M.cwiseAbs().maxCoeff() : 0.0);
  if (M.size() && (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("CharFn::gaussian_kernel: M must be symmetric");
  }
  const int dim = static_cast<int>(M.rows());
  RealMatrix sym = 0.5 * (M + M.transpose());
  return CharFn(std::make_shared<const CharNode>(node::GaussianKernel{std::move(sym), std::move(b)}),
                dim);
}

CharFn CharFn::gaussian_kernel(RealMatrix M) {
  const Eigen::Index dim = M.rows();
  return gaussian_kernel(std::move(M), RealVector::Zero(dim));
}

CharFn CharFn::gaussian_state(const RealMatrix& V, const RealVector& s) {
  require_even(V.rows(), "CharFn::gaussian_state");
  if (V.rows() != V.cols() || s.size() != V.rows()) {
    throw DimensionMismatch("CharFn::gaussian_state: V must be square and match s");
  }
  const RealMatrix W = omega(static_cast<int>(V.rows() / 2));
  RealMatrix M = W.transpose() * V * W;
  M = 0.5 * (M + M.transpose());
  return gaussian_kernel(std::move(M), W.transpose() * s);
}

CharFn CharFn::gaussian_state(const RealMatrix& V) {
  return gaussian_state(V, RealVector::Zero(V.rows()));
}

CharFn CharFn::vacuum(int n) { return gaussian_kernel(RealMatrix::Identity(2 * n, 2 * n)); }

CharFn CharFn::coherent(const RealVector& s) {
  return gaussian_state(RealMatrix::Identity(s.size(), s.size()), s);
}

CharFn CharFn::cosine(RealVector s) {
  require_even(s.size(), "CharFn::cosine");
  const int dim = static_cast<int>(s.size());
  return CharFn(std::make_shared<const CharNode>(node::Cosine{std::move(s)}), dim);
}

CharFn CharFn::mixture(std::vector<double> weights, std::vector<RealVector> points) {
  if (weights.empty() || weights.size() != points.size()) {
    throw InvalidArgument("CharFn::mixture: need one positive weight per point");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidArgument("CharFn::mixture: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("CharFn::mixture: weights must sum to 1, got " + std::to_string(total));
  }
  const Eigen::Index dim = points.front().size();
  require_even(dim, "CharFn::mixture");
  for (const RealVector& p : points) {
    if (p.size() != dim) throw DimensionMismatch("CharFn::mixture: inconsistent point sizes");
  }
  return CharFn(std::make_shared<const CharNode>(
                    node::DisplacementMixture{std::move(weights), std::move(points)}),
                static_cast<int>(dim));
}

CharFn CharFn::product(std::vector<CharFn> factors) {
  if (factors.empty()) throw InvalidArgument("CharFn::product: no factors");
  const int dim = factors.front().arity();
  for (const CharFn& f : factors) {
    if (f.arity() != dim) {
      throw DimensionMismatch("CharFn::product: factors have arities " + std::to_string(dim) +
                              " and " + std::to_string(f.arity()));
    }
  }
  if (factors.size() == 1) return factors.front();
  return CharFn(std::make_shared<const CharNode>(node::Product{std::move(factors)}), dim);
}

CharFn CharFn::pullback(CharFn inner, RealMatrix L) {
  if (L.rows() != inner.arity()) {
    throw DimensionMismatch("CharFn::pullback: L has " + std::to_string(L.rows()) +
                            " rows but inner arity is " + std::to_string(inner.arity()));
  }
  require_even(L.cols(), "CharFn::pullback");
  const int dim = static_cast<int>(L.cols());
  return CharFn(std::make_shared<const CharNode>(
                    node::PullBack{std::make_shared<const CharFn>(std::move(inner)), std::move(L)}),
                dim);
}

cplx CharFn::operator()(const PhasePoint& xi) const {
  if (xi.size() != arity_) {
    throw DimensionMismatch("CharFn: expected argument of size " + std::to_string(arity_) +
                            ", got " + std::to_string(xi.size()));
  }
  return std::visit(
      overloaded{
          [](const node::One&) { return cplx{1.0, 0.0}; },
          [&](const node::GaussianKernel& g) {
            const double quad = xi.dot(g.M * xi);
            return std::exp(cplx{-0.25 * quad, g.b.dot(xi)});
          },
          [&](const node::Cosine& c) { return cplx{std::cos(symplectic_product(c.s, xi)), 0.0}; },
          [&](const node::DisplacementMixture& mix) {
            cplx acc{0.0, 0.0};
            for (std::size_t j = 0; j < mix.weights.size(); ++j) {
              const double phase = symplectic_product(xi, mix.points[j]);
              acc += mix.weights[j] * cplx{std::cos(phase), std::sin(phase)};
            }
            return acc;
          },
          [&](const node::Product& p) {
            cplx acc{1.0, 0.0};
            for (const CharFn& f : p.factors) acc *= f(xi);
            return acc;
          },
          [&](const node::PullBack& pb) { return (*pb.inner)(pb.L * xi); },
      },
      *node_);
}

cplx eval_char(const CharFn& f, const PhasePoint& xi) { return f(xi); }

cplx GaussianTerm::operator()(const PhasePoint& xi) const {
  return coef * std::exp(cplx{-0.25 * xi.dot(M * xi), b.dot(xi)});
}

namespace {

GaussianTerm flat_term(int dim, cplx coef, RealVector b) {
  return GaussianTerm{coef, RealMatrix::Zero(dim, dim), std::move(b)};
}

std::vector<GaussianTerm> expand(const CharFn& f, std::size_t max_terms) {
  const int dim = f.arity();
  return std::visit(
      overloaded{
          [&](const node::One&) {
            return std::vector<GaussianTerm>{flat_term(dim, 1.0, RealVector::Zero(dim))};
          },
          [&](const node::GaussianKernel& g) {
            return std::vector<GaussianTerm>{GaussianTerm{1.0, g.M, g.b}};
          },
          [&](const node::Cosine& c) {
            // s^T Omega xi = (Omega^T s)^T xi
            const RealVector freq = -apply_omega(c.s);
            return std::vector<GaussianTerm>{flat_term(dim, 0.5, freq), flat_term(dim, 0.5, -freq)};
          },
          [&](const node::DisplacementMixture& mix) {
            std::vector<GaussianTerm> out;
            for (std::size_t j = 0; j < mix.weights.size(); ++j) {
              out.push_back(flat_term(dim, mix.weights[j], apply_omega(mix.points[j])));
            }
            return out;
          },
          [&](const node::Product& p) {
            std::vector<GaussianTerm> acc{flat_term(dim, 1.0, RealVector::Zero(dim))};
            for (const CharFn& factor : p.factors) {
              const std::vector<GaussianTerm> rhs = expand(factor, max_terms);
              if (acc.size() * rhs.size() > max_terms) {
                throw InvalidArgument("gaussian_terms: expansion exceeds " +
                                      std::to_string(max_terms) + " terms");
              }
              std::vector<GaussianTerm> next;
              next.reserve(acc.size() * rhs.size());
              for (const GaussianTerm& a : acc) {
                for (const GaussianTerm& b : rhs) {
                  next.push_back(GaussianTerm{a.coef * b.coef, a.M + b.M, a.b + b.b});
                }
              }
              acc = std::move(next);
            }
            return acc;
          },
          [&](const node::PullBack& pb) {
            std::vector<GaussianTerm> inner = expand(*pb.inner, max_terms);
            for (GaussianTerm& t : inner) {
              RealMatrix M = pb.L.transpose() * t.M * pb.L;
              t.M = 0.5 * (M + M.transpose());
              t.b = pb.L.transpose() * t.b;
            }
            return inner;
          },
      },
      f.node());
}

}  // namespace

std::vector<GaussianTerm> gaussian_terms(const CharFn& f, std::size_t max_terms) {
  return expand(f, max_terms);
}

}  // namespace bosonic

#include "bosonic/dilation.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/phase_space.hpp"
#include "bosonic/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bosonic;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

const RealMatrix I2 = RealMatrix::Identity(2, 2);

double max_char_gap(const CharFn& a, const CharFn& b, int count = 1000, double radius = 4.0) {
  Rng rng(12345);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const RealVector xi = rng.in_ball(a.arity(), radius);
    worst = std::max(worst, std::abs(eval_char(a, xi) - eval_char(b, xi)));
  }
  return worst;
}

}  // namespace

TEST(Dilation, AlgorithmNames) {
  EXPECT_EQ(dilation_algorithm_from_string("var-unitary"), DilationAlgorithm::var_unitary);
  EXPECT_EQ(dilation_algorithm_from_string("fixed_unitary"), DilationAlgorithm::fixed_unitary);
  EXPECT_EQ(to_string(DilationAlgorithm::exact), "exact");
  EXPECT_THROW(dilation_algorithm_from_string("magic"), InvalidArgument);
}

TEST(Dilation, ExactAmplifier) {
  const auto ch = amplifier(2.0);
  const GaussianDilation d = exact_dilation(ch);
  EXPECT_EQ(d.m, 1);
  EXPECT_LE((d.Y.transpose() * omega(1) * d.Y + omega(1)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(check_dilation(d).pass());
  const CharFn in = CharFn::coherent(vec({0.4, -0.2}));
  EXPECT_LE(max_char_gap(apply_dilation_char(d, in), apply_to_char(ch, in)), 1e-12);
}

TEST(Dilation, ExactAmplifierOnVacuumIsThermalLike) {
  const GaussianDilation d = exact_dilation(amplifier(2.0));
  const CharFn expected = CharFn::gaussian_kernel(3.0 * I2);
  EXPECT_LE(max_char_gap(apply_dilation_char(d, CharFn::vacuum(1)), expected), 1e-12);
}

TEST(Dilation, ExactRejectsSingularJ) {
  EXPECT_THROW(exact_dilation(binary_displacement(vec({1, 0}))), SingularJ);
  EXPECT_THROW(exact_dilation(identity_channel(1)), SingularJ);
}

TEST(Dilation, VarUnitaryIdentity) {
  const GaussianDilation d = approx_var_unitary(identity_channel(1), 0.1);
  EXPECT_EQ(d.m, 1);
  EXPECT_LE((d.X - 0.9 * I2).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_TRUE(check_dilation(d).pass());
  EXPECT_DOUBLE_EQ(d.provenance.epsilon, 0.1);
}

TEST(Dilation, VarUnitaryBinaryDisplacement) {
  const auto ch = binary_displacement(vec({1, 0}));
  const GaussianDilation d = approx_var_unitary(ch, 0.1);
  const DilationReport rep = check_dilation(d);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.ancilla.pass());
  const CharFn in = CharFn::coherent(vec({0.2, 0.5}));
  EXPECT_LE(max_char_gap(apply_dilation_char(d, in), apply_to_char(var_unitary_channel(ch, 0.1), in)),
            1e-12);
}

TEST(Dilation, VarUnitaryExactOnVacuumForIdentityX) {
  // With X = I the shrink of X and the added noise cancel on the vacuum.
  const auto ch = binary_displacement(vec({1, 0}));
  const CharFn exact = apply_to_char(ch, CharFn::vacuum(1));
  EXPECT_LE(max_char_gap(apply_dilation_char(approx_var_unitary(ch, 0.1), CharFn::vacuum(1)), exact), 1e-15);
}

TEST(Dilation, VarUnitaryConvergesOnCoherentInput) {
  const auto ch = binary_displacement(vec({1, 0}));
  const CharFn in = CharFn::coherent(vec({0.5, 0.5}));
  const CharFn exact = apply_to_char(ch, in);
  double previous = 1e9;
  for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
    const double gap = max_char_gap(apply_dilation_char(approx_var_unitary(ch, eps), in), exact);
    EXPECT_LT(gap, previous) << eps;
    previous = gap;
  }
}

TEST(Dilation, FixedUnitaryIdentityAncilla) {
  const GaussianDilation d = approx_fixed_unitary(identity_channel(1), 0.1);
  ASSERT_TRUE(d.fixed.has_value());
  EXPECT_EQ(d.fixed->k, 1);
  EXPECT_EQ(d.m, 2);
  const RealVector expected = vec({0.1, 10, 0.1, 10});
  EXPECT_LE((d.fixed->W.diagonal() - expected).cwiseAbs().maxCoeff(), 1e-12);
  const DilationReport rep = check_dilation(d);
  EXPECT_TRUE(rep.pass()) << (rep.failures.empty() ? "" : rep.failures.front());
  EXPECT_GE(rep.ancilla.positivity.min_eig, -1e-8);
  EXPECT_LE(rep.penrose_residual, 1e-9);
  EXPECT_LE(rep.sandwich_residual, 1e-9);
  EXPECT_GE(rep.wg_min_eig, -1e-10);
}

TEST(Dilation, FixedUnitaryAmplifierHasNoKernel) {
  const auto ch = amplifier(2.0);
  const GaussianDilation a = approx_fixed_unitary(ch, 0.1);
  const GaussianDilation b = approx_fixed_unitary(ch, 0.02);
  ASSERT_TRUE(a.fixed.has_value());
  EXPECT_EQ(a.fixed->k, 0);
  EXPECT_TRUE(a.fixed->Q.isZero(1e-12));
  const CharFn in = CharFn::coherent(vec({0.3, 0.0}));
  EXPECT_LE(max_char_gap(apply_dilation_char(a, in), apply_dilation_char(b, in)), 1e-12);
  EXPECT_LE(max_char_gap(apply_dilation_char(a, in), apply_to_char(ch, in)), 1e-12);
}

TEST(Dilation, FixedUnitaryMatchesEpsilonChannel) {
  // Identity channel: output char is chi(xi) exp(-eps/4 |xi|^2).
  const double eps = 0.05;
  const GaussianDilation d = approx_fixed_unitary(identity_channel(1), eps);
  const CharFn in = CharFn::coherent(vec({0.3, 0.0}));
  const CharFn expected = CharFn::product({in, CharFn::gaussian_kernel(eps * I2)});
  EXPECT_LE(max_char_gap(apply_dilation_char(d, in), expected), 1e-12);
}

TEST(Dilation, MakeDilationRejectsNonIsometry) {
  EXPECT_THROW(make_dilation(I2, I2, vec({0, 0}), CharFn::vacuum(1)), PairNotIsometric);
}

TEST(Dilation, TruncatedSqueezedAncillaTail) {
  const GaussianDilation d = approx_fixed_unitary(identity_channel(1), 0.2);
  const TruncatedAncilla t = truncate_ancilla(d, 15, QuadratureGrid::defaults(1));
  EXPECT_LE(t.delta, 1e-3);
  EXPECT_NEAR(t.state.trace().real(), 1.0, 1e-12);
}

TEST(Dilation, CoherentMixtureTailShrinks) {
  const GaussianDilation d = approx_var_unitary(binary_displacement(vec({1.5, 0})), 0.2);
  const QuadratureGrid g = QuadratureGrid::defaults(1);
  const double d10 = truncate_ancilla(d, 10, g).delta;
  const double d20 = truncate_ancilla(d, 20, g).delta;
  const double d30 = truncate_ancilla(d, 30, g).delta;
  EXPECT_GE(d10, d20);
  EXPECT_GE(d20, d30);
}

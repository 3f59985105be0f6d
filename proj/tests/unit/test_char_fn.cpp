#include "bosonic/char_fn.hpp"
#include "bosonic/errors.hpp"
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

RealMatrix diag(std::initializer_list<double> v) { return vec(v).asDiagonal(); }

}  // namespace

TEST(CharFn, VacuumValue) {
  EXPECT_NEAR(eval_char(CharFn::vacuum(1), vec({1, 0})).real(), 0.7788007830714049, 1e-15);
}

TEST(CharFn, CoherentPhase) {
  const RealVector s = vec({0.3, -0.2});
  const RealVector xi = vec({0.5, 0.7});
  const cplx expected = std::exp(cplx(-0.25 * xi.squaredNorm(), s.dot(omega(1) * xi)));
  EXPECT_LE(std::abs(eval_char(CharFn::coherent(s), xi) - expected), 1e-15);
}

TEST(CharFn, MixtureEqualsCosine) {
  const RealVector s = vec({1.0, 0.4});
  const CharFn c = CharFn::cosine(s);
  const CharFn m = CharFn::mixture({0.5, 0.5}, {s, RealVector(-s)});
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const RealVector xi = rng.in_ball(2, 6.0);
    EXPECT_LE(std::abs(eval_char(c, xi) - eval_char(m, xi)), 1e-12);
  }
}

TEST(CharFn, ConstructorValidation) {
  EXPECT_THROW(CharFn::gaussian_kernel(RealMatrix::Identity(2, 3)), DimensionMismatch);
  RealMatrix asym = RealMatrix::Identity(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_THROW(CharFn::gaussian_kernel(asym), InvalidArgument);
  EXPECT_THROW(CharFn::mixture({0.7, 0.7}, {vec({1, 0}), vec({0, 1})}), InvalidArgument);
  EXPECT_THROW(CharFn::cosine(vec({1, 0, 0})), DimensionMismatch);
  EXPECT_THROW(CharFn::product({CharFn::vacuum(1), CharFn::vacuum(2)}), DimensionMismatch);
}

TEST(CharFn, GaussianTermsReproduceTree) {
  const CharFn f = CharFn::product(
      {CharFn::pullback(CharFn::cosine(vec({1, 0})), diag({0.5, 2.0})),
       CharFn::gaussian_kernel(diag({0.1, 10.0}), vec({0.2, -0.1}))});
  const auto terms = gaussian_terms(f);
  EXPECT_EQ(terms.size(), 2u);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const RealVector xi = rng.in_ball(2, 3.0);
    cplx sum{0, 0};
    for (const auto& t : terms) sum += t(xi);
    EXPECT_LE(std::abs(sum - eval_char(f, xi)), 1e-13);
  }
}

TEST(Positivity, SamplerIsDeterministicAndIncludesOrigin) {
  Sampler s;
  const auto a = s.point_set(3, 2);
  const auto b = s.point_set(3, 2);
  ASSERT_EQ(a.size(), 8u);
  EXPECT_TRUE(a[0].isZero());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_NE(s.point_set(4, 2)[1], a[1]);
}

TEST(Positivity, HalfIdentityWitnessAlongAxes) {
  const CharFn f = CharFn::gaussian_kernel(0.5 * RealMatrix::Identity(2, 2));
  double worst = 1.0;
  for (double t = 0.25; t <= 4.0; t += 0.25) {
    const std::vector<PhasePoint> pts{vec({0, 0}), vec({t, 0}), vec({0, t})};
    const ComplexMatrix G = gram_matrix(f, omega(1), pts);
    worst = std::min(worst, min_eig_hermitian(G));
  }
  EXPECT_LT(worst, -1e-6);
}

TEST(Positivity, CosineIsClassicallyPositive) {
  const auto cert = check_a_positive(CharFn::cosine(vec({1, 0})), RealMatrix::Zero(2, 2), Sampler{});
  EXPECT_TRUE(cert.pass);
  EXPECT_GE(cert.min_eig, -1e-10);
}

TEST(Positivity, CosineIsNotAState) {
  const auto cert = check_a_positive(CharFn::cosine(vec({1, 0})), omega(1), Sampler{});
  EXPECT_FALSE(cert.pass);
  EXPECT_LT(cert.min_eig, -1e-6);
  EXPECT_FALSE(cert.witness.empty());
}

TEST(Positivity, ExactGaussianOracle) {
  const auto ok = gaussian_a_positive_exact(RealMatrix::Identity(2, 2), omega(1));
  EXPECT_TRUE(ok.pass);
  EXPECT_NEAR(ok.min_eig, 0.0, 1e-14);
  const auto bad = gaussian_a_positive_exact(0.5 * RealMatrix::Identity(2, 2), omega(1));
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.min_eig, -0.5, 1e-14);
}

TEST(Positivity, BochnerOnSqueezedAncillaKernel) {
  EXPECT_FALSE(bochner_check(CharFn::cosine(vec({1, 0})), Sampler{}).pass());
  const auto rep = bochner_check(CharFn::gaussian_kernel(diag({0.1, 10, 0.1, 10})), Sampler{});
  EXPECT_TRUE(rep.pass());
  EXPECT_GE(rep.positivity.min_eig, -1e-8);
}

TEST(Positivity, BoundCheck) {
  EXPECT_TRUE(bound_check(CharFn::vacuum(1), Sampler{}).pass);
}

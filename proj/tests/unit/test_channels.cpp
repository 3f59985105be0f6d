#include "bosonic/channels.hpp"
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

}  // namespace

TEST(Channels, IdentityWithCosineIsValid) {
  const auto ch = make_channel(I2, CharFn::cosine(vec({1, 0})));
  ASSERT_TRUE(ch.cp_certificate.has_value());
  EXPECT_TRUE(ch.cp_certificate->pass);
  EXPECT_TRUE(j_of_x(ch.X).isZero());
}

TEST(Channels, AmplifierWithTooLittleNoiseIsNotCP) {
  try {
    make_channel(std::sqrt(2.0) * I2, CharFn::gaussian_kernel(0.5 * I2));
    FAIL() << "expected NotCP";
  } catch (const NotCP& e) {
    ASSERT_TRUE(e.exact_min_eig().has_value());
    EXPECT_NEAR(*e.exact_min_eig(), -0.5, 1e-12);
  }
}

TEST(Channels, OneAfterAmplificationIsNotCP) {
  EXPECT_THROW(make_channel(std::sqrt(2.0) * I2, CharFn::one(2)), NotCP);
}

TEST(Channels, GaussianActionOnGaussianState) {
  Rng rng(21);
  const RealMatrix X = std::sqrt(2.0) * I2;
  const RealMatrix N = I2;
  const auto ch = gaussian_channel(X, N);
  RealMatrix V(2, 2);
  V << 2.0, 0.3, 0.3, 1.0;
  const CharFn out = apply_to_char(ch, CharFn::gaussian_state(V));
  const RealMatrix W = omega(1);
  const RealMatrix K = X.transpose() * W.transpose() * V * W * X + N;
  for (int i = 0; i < 100; ++i) {
    const RealVector xi = rng.in_ball(2, 3.0);
    const double expected = std::exp(-0.25 * xi.dot(K * xi));
    EXPECT_LE(std::abs(eval_char(out, xi) - expected), 1e-13);
  }
}

TEST(Channels, BinaryDisplacementMatchesMixture) {
  const RealVector s = vec({0.8, -0.3});
  const auto a = binary_displacement(s);
  const auto b = displacement_mixture_channel({0.5, 0.5}, {s, RealVector(-s)});
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const RealVector xi = rng.in_ball(2, 5.0);
    EXPECT_LE(std::abs(eval_char(a.f, xi) - eval_char(b.f, xi)), 1e-12);
  }
  EXPECT_THROW(binary_displacement(vec({0, 0})), InvalidArgument);
}

TEST(Channels, ThreePointMixturePasses) {
  const auto ch = displacement_mixture_channel({0.2, 0.5, 0.3}, {vec({1, 0}), vec({0, 0}), vec({-0.5, 1})});
  ASSERT_TRUE(ch.cp_certificate.has_value());
  EXPECT_TRUE(ch.cp_certificate->pass);
}

TEST(Channels, AttenuatorAndAmplifierPresets) {
  const double t = 0.6;
  EXPECT_NO_THROW(gaussian_channel(std::cos(t) * I2, std::sin(t) * std::sin(t) * I2));
  EXPECT_NO_THROW(amplifier(2.0));
  EXPECT_NO_THROW(attenuator(0.3));
  EXPECT_THROW(amplifier(0.5), InvalidArgument);
}

TEST(Channels, BkNoiseOnVacuum) {
  const double sigma = 0.2;
  const auto ch = bk_noise_channel(sigma);
  const CharFn out = apply_to_char(ch, CharFn::vacuum(1));
  const RealVector xi = vec({0.7, -1.1});
  EXPECT_NEAR(eval_char(out, xi).real(), std::exp(-0.25 * (1 + 2 * sigma) * xi.squaredNorm()), 1e-14);
}

TEST(Channels, ComposeMultipliesAction) {
  const auto a = attenuator(0.5);
  const auto b = amplifier(2.0);
  const auto ab = compose(a, b);
  const CharFn in = CharFn::coherent(vec({0.3, 0.1}));
  const CharFn lhs = apply_to_char(ab, in);
  const CharFn rhs = apply_to_char(b, apply_to_char(a, in));
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const RealVector xi = rng.in_ball(2, 3.0);
    EXPECT_LE(std::abs(eval_char(lhs, xi) - eval_char(rhs, xi)), 1e-13);
  }
}

#include "bosonic/channels.hpp"

#include "bosonic/phase_space.hpp"

#include <cmath>
#include <sstream>

namespace bosonic {

namespace {

void require_even_square(const RealMatrix& X, const char* what) {
  if (X.rows() != X.cols() || X.rows() % 2 != 0 || X.rows() == 0) {
    throw DimensionMismatch(std::string(what) + ": X must be a nonempty 2n x 2n matrix");
  }
}

}  // namespace

LinearBosonicChannel channel_unchecked(const RealMatrix& X, const CharFn& f) {
  require_even_square(X, "channel");
  if (f.arity() != X.rows()) {
    throw DimensionMismatch("channel: f has arity " + std::to_string(f.arity()) + ", X is " +
                            std::to_string(X.rows()) + " square");
  }
  return LinearBosonicChannel{static_cast<int>(X.rows() / 2), X, f, std::nullopt};
}

LinearBosonicChannel make_channel(const RealMatrix& X, const CharFn& f,
                                  const ChannelOptions& options) {
  LinearBosonicChannel ch = channel_unchecked(X, f);
  BochnerOptions probe;
  probe.normalization_tol = options.normalization_tol;
  probe.probe_radius = options.probe_radius;
  probe.probe_threshold = options.probe_threshold;

  const double at_zero = std::abs(f(PhasePoint::Zero(f.arity())) - 1.0);
  if (at_zero > options.normalization_tol) {
    throw NotNormalized("channel: |f(0) - 1| = " + std::to_string(at_zero));
  }
  // Reuse the Bochner probe for continuity only; positivity is against J(X).
  Sampler no_sets = options.sampler;
  no_sets.sets = 0;
  const BochnerReport continuity = bochner_check(f, no_sets, probe);
  if (!continuity.continuous) {
    throw InvalidArgument("channel: f deviates from 1 by " +
                          std::to_string(continuity.continuity_deviation) +
                          " near the origin");
  }

  PositivityCertificate cert = check_a_positive(f, j_of_x(X), options.sampler, options.eig_tol);
  if (!cert.pass) {
    std::ostringstream msg;
    msg << "channel is not completely positive: f is not J(X)-positive (min eigenvalue "
        << cert.min_eig << " on point set " << cert.worst_set << ")";
    std::optional<double> exact;
    if (const auto* g = std::get_if<node::GaussianKernel>(&f.node())) {
      exact = gaussian_a_positive_exact(g->M, j_of_x(X), options.eig_tol).min_eig;
    }
    throw NotCP(msg.str(), std::move(cert), exact);
  }
  ch.cp_certificate = std::move(cert);
  return ch;
}

CharFn apply_to_char(const LinearBosonicChannel& ch, const CharFn& chi_in) {
  if (chi_in.arity() != ch.X.rows()) {
    throw DimensionMismatch("apply_to_char: input arity " + std::to_string(chi_in.arity()) +
                            " does not match channel on " + std::to_string(ch.n) + " modes");
  }
  return CharFn::product({CharFn::pullback(chi_in, ch.X), ch.f});
}

LinearBosonicChannel compose(const LinearBosonicChannel& first, const LinearBosonicChannel& second) {
  if (first.n != second.n) throw DimensionMismatch("compose: mode counts differ");
  CharFn f = CharFn::product({second.f, CharFn::pullback(first.f, second.X)});
  return channel_unchecked(first.X * second.X, f);
}

LinearBosonicChannel identity_channel(int n) {
  if (n < 1) throw InvalidArgument("identity_channel: n must be positive");
  return channel_unchecked(RealMatrix::Identity(2 * n, 2 * n), CharFn::one(2 * n));
}

LinearBosonicChannel binary_displacement(const RealVector& s, const ChannelOptions& options) {
  if (s.size() == 0 || s.size() % 2 != 0) {
    throw DimensionMismatch("binary_displacement: s must have even length");
  }
  if (s.isZero(0.0)) throw InvalidArgument("binary_displacement: s must be nonzero");
  return make_channel(RealMatrix::Identity(s.size(), s.size()), CharFn::cosine(s), options);
}

LinearBosonicChannel displacement_mixture_channel(std::vector<double> weights,
                                                  std::vector<RealVector> points,
                                                  const ChannelOptions& options) {
  CharFn f = CharFn::mixture(std::move(weights), std::move(points));
  return make_channel(RealMatrix::Identity(f.arity(), f.arity()), f, options);
}

LinearBosonicChannel gaussian_channel(const RealMatrix& X, const RealMatrix& N,
                                      const RealVector& d, const ChannelOptions& options) {
  require_even_square(X, "gaussian_channel");
  if (N.rows() != X.rows() || N.cols() != X.cols() || d.size() != X.rows()) {
    throw DimensionMismatch("gaussian_channel: N and d must match X");
  }
  const ExactGaussianCheck exact = gaussian_a_positive_exact(N, j_of_x(X), options.eig_tol);
  if (!exact.pass) {
    std::ostringstream msg;
    msg << "Gaussian channel is not completely positive: min eig of N + iJ(X) is "
        << exact.min_eig;
    throw NotCP(msg.str(), std::nullopt, exact.min_eig);
  }
  LinearBosonicChannel ch = channel_unchecked(X, CharFn::gaussian_kernel(N, d));
  ch.cp_certificate = check_a_positive(ch.f, j_of_x(X), options.sampler, options.eig_tol);
  return ch;
}

LinearBosonicChannel gaussian_channel(const RealMatrix& X, const RealMatrix& N,
                                      const ChannelOptions& options) {
  return gaussian_channel(X, N, RealVector::Zero(X.rows()), options);
}

LinearBosonicChannel amplifier(double gain, int n, const ChannelOptions& options) {
  if (!(gain >= 1.0)) throw InvalidArgument("amplifier: gain must be at least 1");
  if (n < 1) throw InvalidArgument("amplifier: n must be positive");
  const RealMatrix I = RealMatrix::Identity(2 * n, 2 * n);
  return gaussian_channel(std::sqrt(gain) * I, (gain - 1.0) * I, options);
}

LinearBosonicChannel attenuator(double eta, int n, const ChannelOptions& options) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("attenuator: eta must lie in [0, 1]");
  if (n < 1) throw InvalidArgument("attenuator: n must be positive");
  const RealMatrix I = RealMatrix::Identity(2 * n, 2 * n);
  return gaussian_channel(std::sqrt(eta) * I, (1.0 - eta) * I, options);
}

LinearBosonicChannel additive_noise(const RealMatrix& N, const ChannelOptions& options) {
  return gaussian_channel(RealMatrix::Identity(N.rows(), N.cols()), N, options);
}

LinearBosonicChannel bk_noise_channel(double sigma, int n, const ChannelOptions& options) {
  if (!(sigma >= 0.0)) throw InvalidArgument("bk_noise_channel: sigma must be nonnegative");
  if (n < 1) throw InvalidArgument("bk_noise_channel: n must be positive");
  return additive_noise(2.0 * sigma * RealMatrix::Identity(2 * n, 2 * n), options);
}

}  // namespace bosonic

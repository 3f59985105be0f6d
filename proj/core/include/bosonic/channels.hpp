#pragma once

#include "bosonic/char_fn.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bosonic {

/// The sampled or exact positivity test for J(X) failed. Carries the
/// certificate (with witness point set) when one was produced.
class NotCP : public Error {
 public:
  NotCP(const std::string& what, std::optional<PositivityCertificate> certificate,
        std::optional<double> exact_min_eig = std::nullopt)
      : Error(what), certificate_(std::move(certificate)), exact_min_eig_(exact_min_eig) {}

  const std::optional<PositivityCertificate>& certificate() const { return certificate_; }
  std::optional<double> exact_min_eig() const { return exact_min_eig_; }

 private:
  std::optional<PositivityCertificate> certificate_;
  std::optional<double> exact_min_eig_;
};

/// chi(xi) -> chi(X xi) f(xi) on n modes.
struct LinearBosonicChannel {
  int n = 0;
  RealMatrix X;
  CharFn f;
  std::optional<PositivityCertificate> cp_certificate;  // refers to j_of_x(X)
};

struct ChannelOptions {
  Sampler sampler{};
  double normalization_tol = 1e-9;
  double eig_tol = 1e-8;
  double probe_radius = 1e-3;
  double probe_threshold = 0.1;
};

/// Checks f(0) = 1, the continuity probe and J(X)-positivity of f, then
/// attaches the certificate. Throws NotNormalized or NotCP.
LinearBosonicChannel make_channel(const RealMatrix& X, const CharFn& f,
                                  const ChannelOptions& options = {});

/// Builds the channel without any positivity test. For internal
/// constructions whose complete positivity follows from the inputs.
LinearBosonicChannel channel_unchecked(const RealMatrix& X, const CharFn& f);

CharFn apply_to_char(const LinearBosonicChannel& ch, const CharFn& chi_in);

/// Channel (X1 X2, f2(xi) f1(X2 xi)): first ch1, then ch2.
LinearBosonicChannel compose(const LinearBosonicChannel& first, const LinearBosonicChannel& second);

LinearBosonicChannel identity_channel(int n);

/// Equal mixture of conjugation by D(s) and D(-s).
LinearBosonicChannel binary_displacement(const RealVector& s, const ChannelOptions& options = {});

LinearBosonicChannel displacement_mixture_channel(std::vector<double> weights,
                                                  std::vector<RealVector> points,
                                                  const ChannelOptions& options = {});

/// X with f = GaussianKernel(N, d). Complete positivity is decided by the
/// exact test N + iJ(X) >= 0; a sampled certificate is attached as well.
LinearBosonicChannel gaussian_channel(const RealMatrix& X, const RealMatrix& N,
                                      const RealVector& d, const ChannelOptions& options = {});
LinearBosonicChannel gaussian_channel(const RealMatrix& X, const RealMatrix& N,
                                      const ChannelOptions& options = {});

/// Phase-insensitive amplifier sqrt(G) I with noise (G - 1) I, G >= 1.
LinearBosonicChannel amplifier(double gain, int n = 1, const ChannelOptions& options = {});

/// Pure-loss attenuator sqrt(eta) I with noise (1 - eta) I, 0 <= eta <= 1.
LinearBosonicChannel attenuator(double eta, int n = 1, const ChannelOptions& options = {});

/// Classical Gaussian additive noise: X = I, f = GaussianKernel(N).
LinearBosonicChannel additive_noise(const RealMatrix& N, const ChannelOptions& options = {});

/// X = I, f(xi) = exp(-(sigma/2) xi^T xi), i.e. exp(-sigma |alpha|^2) with
/// alpha = (x + ip)/sqrt(2).
LinearBosonicChannel bk_noise_channel(double sigma, int n = 1, const ChannelOptions& options = {});

}  // namespace bosonic

#pragma once

#include "bosonic/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace bosonic {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 with explicit conversions. The standard distributions are
// implementation-defined, which would break byte-identical reports.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform in the closed ball of the given radius in R^dim.
  RealVector in_ball(Eigen::Index dim, double radius) {
    RealVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal();
    const double norm = v.norm();
    if (norm == 0.0) return v;
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim));
    return v * (r / norm);
  }

  RealMatrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bosonic

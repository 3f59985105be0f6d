#pragma once

#include <stdexcept>
#include <string>

namespace bosonic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// J(X) has a vanishing canonical pair; Algorithm-1 style exact dilation is
// unavailable and an approximate construction must be used instead.
class SingularJ : public Error {
 public:
  using Error::Error;
};

class PairNotIsometric : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

class EpsilonSingular : public Error {
 public:
  using Error::Error;
};

class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class UnphysicalCovariance : public Error {
 public:
  using Error::Error;
};

class ModeCountGuard : public Error {
 public:
  using Error::Error;
};

class NonSymplectic : public Error {
 public:
  using Error::Error;
};

}  // namespace bosonic

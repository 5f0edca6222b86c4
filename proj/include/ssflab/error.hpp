#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssflab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A dense oracle was asked for a matrix larger than its configured cap.
class OracleCapExceeded : public Error {
 public:
  OracleCapExceeded(std::size_t dimension, std::size_t cap)
      : Error("matrix dimension " + std::to_string(dimension) +
              " exceeds oracle cap " + std::to_string(cap)),
        dimension_(dimension),
        cap_(cap) {}
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t dimension_;
  std::size_t cap_;
};

/// The symmetric factorization hit an exactly singular pivot block before the
/// last block, and every retry at a nudged energy failed as well.
class FactorizationBreakdown : public Error {
 public:
  FactorizationBreakdown(std::size_t pivot_index, double energy)
      : Error("symmetric factorization broke down at pivot " +
              std::to_string(pivot_index) + " (E = " + std::to_string(energy) +
              ")"),
        pivot_index_(pivot_index),
        energy_(energy) {}
  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double energy() const noexcept { return energy_; }

 private:
  std::size_t pivot_index_;
  double energy_;
};

}  // namespace ssflab

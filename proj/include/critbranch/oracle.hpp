#pragma once

// Truncated CTMC generator on states {0..Nmax} and transition probabilities by
// uniformization. Jumps above Nmax are dropped and reported, never
// redistributed, so rows of P(t) are substochastic.

#include <cstddef>
#include <vector>

#include "critbranch/laws.hpp"

namespace critbranch {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  static DenseMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<double>& data() const noexcept { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct TruncatedGenerator {
  std::size_t Nmax = 0;
  DenseMatrix Q;
  std::vector<double> clipped_rate;  // per row
  double clipped_mass_rate = 0.0;    // sum over rows
};

/// h may be null for the system without immigration.
TruncatedGenerator build_generator(const OffspringLaw& f, const ImmigrationLaw* h, std::size_t Nmax);

struct UniformizationInfo {
  double rate = 0.0;     // q = max |Q_ii|
  std::size_t terms = 0;  // Poisson terms used
};

/// Row i of P(t). Columns are evaluated in parallel.
std::vector<double> uniformized_row(const TruncatedGenerator& gen, std::size_t i, double t, double eps = 1e-10,
                                    UniformizationInfo* info = nullptr);
/// Single-threaded reference for `uniformized_row`; results are bit-identical.
std::vector<double> uniformized_row_serial(const TruncatedGenerator& gen, std::size_t i, double t,
                                           double eps = 1e-10, UniformizationInfo* info = nullptr);
/// Full P(t), rows in parallel.
DenseMatrix uniformized_transition(const TruncatedGenerator& gen, double t, double eps = 1e-10);

}  // namespace critbranch

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratspec {

struct EigenvalueEntry {
  int k = 0;                 // 1-based index into the sorted spectrum
  double lambda = 0.0;       // units 1/length^2
  int multiplicity = 1;
  double residual = 0.0;
  bool merged = false;       // clustered roots reported as one entry
};

/// Ordered spectrum of one form degree, with solver provenance.
struct SpectralResult {
  int degree = 0;
  std::vector<EigenvalueEntry> eigenvalues;  // ascending in lambda
  std::string method;
  std::string discretization;
  double tolerance = 0.0;
  std::uint64_t seed = 0;

  /// Eigenvalues expanded by multiplicity, ascending.
  std::vector<double> flattened() const;

  /// Counting function N(t) = #{ lambda_k < t }, multiplicities included.
  int count_below(double threshold) const;

  void check_sorted() const;
};

/// Number of eigenvalues in the zero cluster (below gap_tol).
///
/// Refuses when gap_tol does not separate the cluster from the first
/// positive eigenvalue by a ratio of at least 10^3.
int kernel_dimension(const SpectralResult& result, double gap_tol);

}  // namespace stratspec

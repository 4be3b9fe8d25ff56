#include "stratspec/spectral_result.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stratspec {

std::vector<double> SpectralResult::flattened() const {
  std::vector<double> out;
  for (const auto& e : eigenvalues)
    for (int i = 0; i < e.multiplicity; ++i) out.push_back(e.lambda);
  return out;
}

int SpectralResult::count_below(double threshold) const {
  int n = 0;
  for (const auto& e : eigenvalues)
    if (e.lambda < threshold) n += e.multiplicity;
  return n;
}

void SpectralResult::check_sorted() const {
  for (std::size_t i = 1; i < eigenvalues.size(); ++i)
    if (eigenvalues[i].lambda < eigenvalues[i - 1].lambda)
      throw std::logic_error("SpectralResult: eigenvalues not sorted");
}

int kernel_dimension(const SpectralResult& result, double gap_tol) {
  result.check_sorted();
  if (gap_tol <= 0.0) throw std::invalid_argument("kernel_dimension: gap_tol must be positive");
  const std::vector<double> lam = result.flattened();
  int dim = 0;
  for (double l : lam)
    if (l < gap_tol) ++dim;
  if (dim > 0 && static_cast<std::size_t>(dim) < lam.size()) {
    const double last_zero = std::max(std::abs(lam[dim - 1]), 1e-300);
    const double first_pos = lam[dim];
    if (first_pos / last_zero < 1e3) {
      std::ostringstream msg;
      msg << "kernel_dimension: no spectral gap at gap_tol=" << gap_tol
          << " (straddling eigenvalues " << lam[dim - 1] << " and " << first_pos << ")";
      throw std::runtime_error(msg.str());
    }
  }
  return dim;
}

}  // namespace stratspec

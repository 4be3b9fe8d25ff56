#pragma once

#include <vector>

namespace stratspec {

/// Bessel function J_nu(x) for real order nu >= 0.  Ascending series below a
/// fixed crossover, large-argument asymptotics beyond; the two branches agree
/// to ~1e-10 at the seam.
double bessel_j(double nu, double x);

/// d/dx J_nu(x), via (nu/x) J_nu - J_{nu+1}.
double bessel_j_prime(double nu, double x);

/// First `count` positive roots of x -> d/dx J_nu(x), ascending.
std::vector<double> bessel_j_prime_roots(double nu, int count);

}  // namespace stratspec

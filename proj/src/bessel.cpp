#include "stratspec/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace stratspec {

namespace {

constexpr double kCrossover = 15.0;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

double series_j(double nu, double x) {
  // sum of (-1)^m (x/2)^{2m+nu} / (m! Gamma(m+nu+1)) in long double
  const long double half = 0.5L * static_cast<long double>(x);
  const long double lh = std::log(half);
  long double sum = 0.0L;
  for (int m = 0; m < 400; ++m) {
    const long double lt = (2.0L * m + nu) * lh - lgammal(m + 1.0L) -
                           lgammal(m + static_cast<long double>(nu) + 1.0L);
    const long double term = ((m % 2) ? -1.0L : 1.0L) * expl(lt);
    sum += term;
    if (m > half * half && fabsl(term) < 1e-22L * std::max(fabsl(sum), 1e-30L)) break;
  }
  return static_cast<double>(sum);
}

double asymptotic_j(double nu, double x) {
  // J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)], chi = x - (nu/2 + 1/4) pi
  const long double mu = 4.0L * nu * nu;
  long double p = 1.0L, q = 0.0L;
  long double term = 1.0L;
  long double prev = 1e300L;
  for (int k = 1; k < 60; ++k) {
    term *= (mu - (2.0L * k - 1.0L) * (2.0L * k - 1.0L)) / (k * 8.0L * x);
    if (fabsl(term) > prev) break;  // asymptotic series: stop at smallest term
    prev = fabsl(term);
    const int r = k % 4;
    if (r == 0)
      p += term;
    else if (r == 1)
      q += term;
    else if (r == 2)
      p -= term;
    else
      q -= term;
  }
  const long double chi = static_cast<long double>(x) -
                          (0.5L * static_cast<long double>(nu) + 0.25L) * kPiL;
  const long double amp = sqrtl(2.0L / (kPiL * static_cast<long double>(x)));
  return static_cast<double>(amp * (p * cosl(chi) - q * sinl(chi)));
}

}  // namespace

double bessel_j(double nu, double x) {
  if (nu < 0.0 || x < 0.0) throw std::invalid_argument("bessel_j: need nu >= 0, x >= 0");
  if (nu > 150.0)
    throw std::range_error("bessel_j: order out of supported range [0, 150]");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= kCrossover) return series_j(nu, x);
  // beyond the crossover: series cancellation is mild only when nu keeps up
  // with x; otherwise seed the (stable, since nu < x) upward recurrence
  // J_{v+1} = (2v/x) J_v - J_{v-1} at fractional order with the asymptotics.
  if (nu >= x - 5.0) return series_j(nu, x);
  const double nu0 = nu - std::floor(nu);
  long double jm = asymptotic_j(nu0, x);
  long double j = asymptotic_j(nu0 + 1.0, x);
  if (nu <= nu0 + 0.5) return static_cast<double>(jm);
  double v = nu0 + 1.0;
  while (v < nu - 0.5) {
    const long double jn = (2.0L * v / x) * j - jm;
    jm = j;
    j = jn;
    v += 1.0;
  }
  return static_cast<double>(j);
}

double bessel_j_prime(double nu, double x) {
  if (x == 0.0) {
    if (nu == 1.0) return 0.5;
    return nu < 1.0 && nu > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return (nu / x) * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

std::vector<double> bessel_j_prime_roots(double nu, int count) {
  if (count < 1) throw std::invalid_argument("bessel_j_prime_roots: count >= 1");
  std::vector<double> roots;
  const double step = 0.05;
  double x = (nu == 0.0) ? 0.5 : 1e-3;  // skip the x = 0 root of J_0'
  double fx = bessel_j_prime(nu, x);
  while (static_cast<int>(roots.size()) < count) {
    const double x2 = x + step;
    const double f2 = bessel_j_prime(nu, x2);
    if ((fx < 0.0) != (f2 < 0.0)) {
      double a = x, b = x2;
      double fa = fx;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = bessel_j_prime(nu, m);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x = x2;
    fx = f2;
    if (x > nu + 40.0 + 4.0 * count) break;
  }
  if (static_cast<int>(roots.size()) < count)
    throw std::runtime_error("bessel_j_prime_roots: scan exhausted before finding all roots");
  return roots;
}

}  // namespace stratspec

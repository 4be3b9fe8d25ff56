#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "stratspec/mesh.hpp"
#include "stratspec/mesh_hodge.hpp"
#include "stratspec/spectral_result.hpp"

namespace stratspec {
namespace minmax {

/// Compactly supported p-form on the open unit box: psi = f dx_1..dx_p with
/// f a tensor product of the C^2 bump (t(1-t))^3 in every coordinate,
/// normalized so the quadrature integral of |psi|^2 is one.
struct BumpProfile {
  int n = 0;
  int p = 0;
  int grid = 0;          // 1-d midpoint quadrature nodes per axis
  double energy = 0.0;   // integral of |d psi|^2
  double quotient_sq = 0.0;  // squared distance from Ker(d), in [0, 1]
  double l2_sq = 1.0;
  double scale = 1.0;    // normalization factor applied to f
};

BumpProfile bump_profile(int n, int p, int grid);

/// 2^{nc} translated copies of the profile pulled back to disjoint dyadic
/// boxes of side 2^{-c}; the attached constants are computed by quadrature on
/// the rescaled grid, so their ratios to the level-0 constants are exact
/// powers of two.
struct BoxFamily {
  int c = 0;
  long long count = 0;
  double energy = 0.0;
  double quotient_sq = 0.0;
  double l2_sq = 0.0;
};

BoxFamily box_family(const BumpProfile& psi, int c);

/// Upper bound lambda_{k,p} <= 4 Lambda^{4p+2n+2} E_psi / N_psi * kbar^{2/n}
/// for any space with a Lambda-biLipschitz chart from the unit box, where
/// kbar rounds k up to the next power 2^{nc}.
struct RayleighCertificate {
  int k = 0;
  int p = 0;
  double bound = 0.0;
  double Lambda = 1.0;
  int c = 0;
  double energy = 0.0;
  double quotient_sq = 0.0;
  std::string provenance;
};

RayleighCertificate certificate(double Lambda, int n, int p, int k, const BumpProfile& psi);

/// Largest Rayleigh quotient |d omega|^2 / |omega|^2_quotient over the span
/// of the given p-cochains, after projecting each off Ker(d_p).  Throws if
/// the projected set is numerically dependent.
double empirical_rayleigh(const std::vector<Eigen::VectorXd>& forms,
                          const mesh_hodge::CochainSystem& C, int p);

/// Interpolate the level-c box family onto a flat torus mesh covering the
/// unit box (one cochain per box, 2^{nc} in total).
std::vector<Eigen::VectorXd> box_cochains(const BumpProfile& psi, int c,
                                          const StratifiedComplex& torus, int p);

/// Two-sided eigenvalue envelope under a C-biLipschitz change of space:
/// [C^{-2n-4p-2} lambda, C^{2n+4p+2} lambda].
std::pair<double, double> bilipschitz_envelope(double C, int n, int p, double lambda);

/// Least-squares fit of log(lambda_k) = exponent * log(k) + log(constant)
/// over k in [k_lo, k_hi] (1-based, multiplicities expanded).
std::pair<double, double> weyl_fit(const SpectralResult& result, int k_lo, int k_hi);

}  // namespace minmax
}  // namespace stratspec

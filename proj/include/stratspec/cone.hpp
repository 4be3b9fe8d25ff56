#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "stratspec/metric_graph.hpp"
#include "stratspec/spectral_result.hpp"

namespace stratspec {
namespace cone {

/// Base of a truncated metric cone CY(eps): a metric graph, a finite point
/// set with pairwise distances, or an abstract ascending base spectrum.
struct PointSetBase {
  int count = 0;
  std::vector<std::vector<double>> distances;  // optional, diameter <= pi
};
using ConeBase = std::variant<MetricGraph, PointSetBase, std::vector<double>>;

struct ConeSpace {
  ConeBase base;
  double eps = 1.0;
  int base_dim = 0;  // k - 1
  void validate() const;
};

/// Distance on CY from the law-of-cosines expression (with the square root;
/// the printed formula omits it).
double cone_distance(double t1, double t2, double d_y);

/// Dimensions of the four cohomology theories of a cone CY over a
/// (k-1)-dimensional base, per degree.
struct CohomologyTable {
  int dim = 0;  // k for a cone table, n after a Kunneth product
  std::map<int, int> h;     // L2 cohomology H^i
  std::map<int, int> h_c;   // compactly supported H^i_c
  std::map<int, int> ih;    // IH_j
  std::map<int, int> ih_c;  // IH_{j,c}
  int get(const std::map<int, int>& m, int i) const;
};

/// L2-cohomology of CY from the base dimensions.  For k = 1 the single entry
/// base_dims[0] is the reduced 0-th homology dimension of the finite base.
CohomologyTable cone_l2_cohomology(const std::map<int, int>& base_dims, int k);

/// Intersection homology of CY from the base IH dimensions (compact base, so
/// IH = IH_c on the base).  k = 1 convention as above.
CohomologyTable cone_ih(const std::map<int, int>& base_ih, int k);

/// Kunneth transfer across B^{n-k} x CY: H unshifted, H_c shifted by n-k,
/// IH shifted by n-k, IH_c unshifted.
CohomologyTable kunneth_product(const CohomologyTable& cone_table, int ball_dim);

/// Radial spectrum of the separated equation
///   -f'' - f'/r + (mu/r^2) f = lambda f  on (0, eps],
/// square-integrable at 0, Neumann lid f'(eps) = 0.  Eigenfunctions are
/// J_nu(sqrt(lambda) r) with nu = sqrt(mu); lambda = 0 joins for mu = 0.
SpectralResult radial_spectrum(double mu, double eps, int count, double tol);

/// Spectrum of Delta_0 on CY(eps) with Neumann lid, merged over base
/// eigenvalue branches.  A 0-dimensional base reduces to interval problems
/// with the metric-graph vertex conditions at the cone point.
SpectralResult cone_graph_spectrum(const ConeBase& base, double eps, int count);

}  // namespace cone
}  // namespace stratspec

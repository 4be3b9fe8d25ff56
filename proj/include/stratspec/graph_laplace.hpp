#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stratspec/metric_graph.hpp"
#include "stratspec/spectral_result.hpp"

namespace stratspec {
namespace graph_laplace {

// Vertex conditions of the degree-0 form Laplacian on a metric graph:
// at each vertex the incoming limiting values of f sum to the outgoing ones,
// and the oriented derivative f' takes a single value F_v over all adjoining
// edge endpoints.  Vertices listed in `neumann_vertices` instead get the
// absolute (lid) condition f' = 0 on each adjoining endpoint, with no balance
// row; this is what the truncated-cone lid needs.

/// All eigenvalues of Delta_0 in [lambda_lo, lambda_hi], with multiplicities
/// read from the numerical null space of the vertex-condition matrix.
SpectralResult secular_spectrum_0(const MetricGraph& g, double lambda_lo, double lambda_hi,
                                  double tol, const std::set<std::string>& neumann_vertices = {});

/// First `count` eigenvalues of the piecewise-linear Galerkin discretization
/// of the quadratic form Q(f) = sum_e int |f_e'|^2 on the balance-constrained
/// space.  Converges to the secular values at rate O(h^2).
SpectralResult fem_spectrum_0(const MetricGraph& g, int nodes_per_edge, int count,
                              const std::set<std::string>& neumann_vertices = {});

/// Max |<df, omega> - <f, d* omega>| over random samples of the discrete
/// Dom(d) x Dom(d*).  `flip_edge`, when nonempty, deliberately breaks the
/// endpoint sign convention on that edge (negative control).
double adjointness_defect(const MetricGraph& g, int trials, std::uint64_t seed,
                          const std::string& flip_edge = "");

/// Reverse the orientation of edge `e`; profiles on `e` flip sign, all others
/// are unchanged.
std::pair<MetricGraph, std::vector<EdgeProfile>> reverse_edge(
    const MetricGraph& g, const std::string& e, const std::vector<EdgeProfile>& profiles);

}  // namespace graph_laplace
}  // namespace stratspec

#pragma once

#include <map>
#include <string>
#include <vector>

#include "stratspec/mesh.hpp"
#include "stratspec/metric_graph.hpp"

namespace stratspec {
namespace strata_ih {

/// Perversity function on codimensions 0..n.
struct Perversity {
  std::vector<int> values;  // values[k] for codimension k

  int at(int k) const;
  void validate() const;  // p(0) = 0, increments in {0, 1}
};

/// Upper-middle perversity: p(0) = 0, p(k) = floor((k - 1) / 2).
Perversity gm_perversity(int n);

/// Fill in the stratification of a complex whose strata are not given, by
/// combinatorial link classification (supported for dim <= 3).  A complex
/// that already carries strata is returned unchanged.
StratifiedComplex stratify_multiconical(const StratifiedComplex& K);

/// Goresky-MacPherson allowability of a single simplex: for every level j
/// with a nonempty stratum, counting k = dim - j,
///   dim(|sigma| meet X_j) <= p - k + perversity(k),
/// where the intersection dimension is (number of vertices of sigma in the
/// vertex set of X_j) - 1 and an empty intersection always passes.  Each X_j
/// must be a full subcomplex, which one barycentric subdivision guarantees.
bool allowable(const StratifiedComplex& K, int p, int index, const Perversity& pv);

struct IHResult {
  std::vector<int> perversity;
  std::map<int, int> betti;  // degree -> rank, zero outside [0, dim]
  std::string fingerprint;   // stratification summary the ranks were computed on
};

/// Intersection homology Betti numbers over the rationals.  One barycentric
/// subdivision is applied up front so strata become full subcomplexes; ranks
/// of the allowable-chain boundary maps are computed by exact rational
/// elimination.
IHResult ih_betti(const StratifiedComplex& K, const Perversity& pv);

struct CrossCheckRow {
  int degree = 0;      // form degree p
  int kernel_dim = 0;  // numeric dim Ker(Delta_p)
  int ih_degree = 0;   // compared against IH_{n-p}
  int ih_rank = 0;
  bool pass = false;
};

struct CrossCheckReport {
  bool pass = true;
  std::vector<CrossCheckRow> rows;

  std::string table() const;
};

/// Compare numerically computed kernel dimensions (index = form degree,
/// size n + 1) against IH_{n - p}.
CrossCheckReport hodge_cross_check(const std::vector<int>& kernel_dims, const IHResult& ih);

/// Kernel dimensions of the degree-0 and degree-1 metric-graph Laplacians:
/// degree 0 counted from the secular spectrum near zero, degree 1 from the
/// exact rank of the edgewise-constant matching conditions (the number of
/// connected components).
std::vector<int> graph_kernel_dims(const MetricGraph& g, double gap_tol = 1e-6);

}  // namespace strata_ih
}  // namespace stratspec

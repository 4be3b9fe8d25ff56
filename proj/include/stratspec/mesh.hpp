#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace stratspec {

/// Simplicial complex with an optional stratification filtration
/// X_dim >= X_{dim-1} >= ... >= X_0 and an optional boundary subcomplex.
/// Simplices are stored per dimension as ascending vertex lists, in
/// lexicographic order; `simp[p][i]` is the i-th p-simplex.
///
/// The metric is piecewise flat: edge lengths come from the embedded
/// coordinates unless overridden per edge, which is how cone metrics that
/// admit no flat embedding are realized (and how periodic identifications
/// get their true lengths).
struct StratifiedComplex {
  int dim = 0;
  std::vector<std::vector<double>> coords;  // may be empty if all lengths are overridden
  std::vector<std::vector<std::vector<int>>> simp;
  std::map<std::pair<int, int>, double> length_override;  // key (u, v) with u < v

  // strata[j] = simplices of the subcomplex X_j (pairs (p, index)), for
  // j = 0 .. dim-1, each closed under faces and nested: strata[j] contains
  // strata[j-1].  An empty vector means no singular strata.
  std::vector<std::set<std::pair<int, int>>> strata;

  // boundary subcomplex, as (p, index) pairs; closed under faces
  std::set<std::pair<int, int>> boundary;

  int vertex_count() const { return static_cast<int>(simp.empty() ? 0 : simp[0].size()); }
  int count(int p) const { return (p < 0 || p > dim) ? 0 : static_cast<int>(simp[p].size()); }
  int index_of(int p, const std::vector<int>& vertices) const;  // -1 if absent

  double edge_length(int u, int v) const;
  void validate() const;
  bool in_boundary(int p, int i) const { return boundary.count({p, i}) != 0; }

  /// Add every face of every simplex already listed in the set.
  void close_under_faces(std::set<std::pair<int, int>>& cells) const;
};

/// Build the full face lattice from a list of top-dimensional simplices
/// (plus optional lower-dimensional cells for non-pure complexes).
StratifiedComplex make_complex(int dim, const std::vector<std::vector<double>>& coords,
                               const std::vector<std::vector<int>>& cells);

/// One barycentric subdivision.  Vertex of the result = barycenter of an
/// input simplex; simplices = strictly increasing face chains.  Strata and
/// boundary map to the subdivisions of the corresponding subcomplexes, which
/// are automatically full subcomplexes of the result.  Coordinates are
/// averaged; length overrides do not survive (subdivision is only used for
/// metric-free homology computations).
StratifiedComplex barycentric_subdivide(const StratifiedComplex& K);

/// Text format: "STRATOFF" header, then `dim`, `vertices` (count + coordinate
/// lines, possibly of length 0), `cells` (count + "k v0 .. v_{k-1}" lines),
/// optional `lengths`, `strata` (per-level cell lists), `boundary` blocks.
StratifiedComplex parse_stratoff(std::istream& in);
void emit_stratoff(const StratifiedComplex& K, std::ostream& out);

}  // namespace stratspec

#pragma once

#include "stratspec/mesh.hpp"
#include "stratspec/metric_graph.hpp"

namespace stratspec {
namespace mesh_gen {

/// Unit interval [0,1] with m cells; boundary = the two endpoints.
StratifiedComplex interval_mesh(int m);

/// Flat unit-square torus, m x m grid, each square split along a diagonal.
/// Edge lengths come from overrides so the periodic identification is exact.
StratifiedComplex torus_grid_2d(int m);

/// Flat unit-cube 3-torus, m^3 grid, each cube split into 6 tetrahedra.
StratifiedComplex torus_grid_3d(int m);

/// Unit disk: center vertex, `rings` concentric rings of `m` vertices each.
/// Boundary = outermost ring; if `stratify`, the boundary is also X_1.
StratifiedComplex disk_mesh(int rings, int m, bool stratify = false);

/// Unit sphere: octahedron refined `subdiv` times, vertices projected out.
StratifiedComplex sphere_mesh(int subdiv);

/// Suspension of an m-gon with the two apexes as the X_0 stratum.
StratifiedComplex spindle_mesh(int m);

/// Smallest triangulated torus (7 vertices, 14 triangles), unit edge lengths.
StratifiedComplex csaszar_torus();

/// Cone over a closed base complex: apex joined to every base simplex, the
/// base kept as the lid.  Strata: X_0 = apex, top singular level = lid + apex.
/// `height` is the apex-to-base-vertex edge length.
StratifiedComplex cone_over(const StratifiedComplex& base, double height = 1.0);

/// Simplicial model of a metric graph: every edge split into three, so that
/// self-loops and parallel edges become honest 1-complexes.
StratifiedComplex graph_complex(const MetricGraph& g);

}  // namespace mesh_gen
}  // namespace stratspec

#include "stratspec/mesh_gen.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stratspec {
namespace mesh_gen {

StratifiedComplex interval_mesh(int m) {
  if (m < 1) throw std::invalid_argument("interval_mesh: m >= 1");
  std::vector<std::vector<double>> coords;
  for (int i = 0; i <= m; ++i) coords.push_back({static_cast<double>(i) / m});
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < m; ++i) cells.push_back({i, i + 1});
  auto K = make_complex(1, coords, cells);
  K.boundary = {{0, K.index_of(0, {0})}, {0, K.index_of(0, {m})}};
  return K;
}

StratifiedComplex torus_grid_2d(int m) {
  if (m < 3) throw std::invalid_argument("torus_grid_2d: m >= 3");
  auto vid = [m](int i, int j) { return ((i % m + m) % m) * m + ((j % m + m) % m); };
  std::vector<std::vector<double>> coords(m * m, std::vector<double>(2));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) coords[vid(i, j)] = {i / static_cast<double>(m),
                                                     j / static_cast<double>(m)};
  std::vector<std::vector<int>> cells;
  const double h = 1.0 / m, diag = std::sqrt(2.0) / m;
  std::map<std::pair<int, int>, double> lens;
  auto edge = [&](int u, int v, double L) {
    if (u > v) std::swap(u, v);
    lens[{u, v}] = L;
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i, j + 1), d = vid(i + 1, j + 1);
      cells.push_back({a, b, d});
      cells.push_back({a, c, d});
      edge(a, b, h);
      edge(a, c, h);
      edge(b, d, h);
      edge(c, d, h);
      edge(a, d, diag);
    }
  auto K = make_complex(2, coords, cells);
  K.length_override = std::move(lens);
  return K;
}

StratifiedComplex torus_grid_3d(int m) {
  if (m < 3) throw std::invalid_argument("torus_grid_3d: m >= 3");
  auto vid = [m](int i, int j, int k) {
    auto w = [m](int x) { return (x % m + m) % m; };
    return (w(i) * m + w(j)) * m + w(k);
  };
  std::vector<std::vector<double>> coords(m * m * m, std::vector<double>(3));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        coords[vid(i, j, k)] = {i / static_cast<double>(m), j / static_cast<double>(m),
                                k / static_cast<double>(m)};
  std::map<std::pair<int, int>, double> lens;
  auto edge = [&](int u, int v, double L) {
    if (u > v) std::swap(u, v);
    lens[{u, v}] = L;
  };
  std::vector<std::vector<int>> cells;
  // Freudenthal split: six tetrahedra per cube, one per vertex-to-vertex
  // monotone lattice path
  const int paths[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        for (const auto& perm : paths) {
          int ofs[3] = {0, 0, 0};
          std::vector<int> tet = {vid(i, j, k)};
          std::vector<std::array<int, 3>> pts = {{0, 0, 0}};
          for (int step = 0; step < 3; ++step) {
            ofs[perm[step]] += 1;
            tet.push_back(vid(i + ofs[0], j + ofs[1], k + ofs[2]));
            pts.push_back({ofs[0], ofs[1], ofs[2]});
          }
          cells.push_back(tet);
          for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
              double s = 0.0;
              for (int c = 0; c < 3; ++c) {
                const double d = (pts[b][c] - pts[a][c]) / static_cast<double>(m);
                s += d * d;
              }
              edge(tet[a], tet[b], std::sqrt(s));
            }
        }
      }
  auto K = make_complex(3, coords, cells);
  K.length_override = std::move(lens);
  return K;
}

StratifiedComplex disk_mesh(int rings, int m, bool stratify) {
  if (rings < 1 || m < 3) throw std::invalid_argument("disk_mesh: rings >= 1, m >= 3");
  std::vector<std::vector<double>> coords = {{0.0, 0.0}};
  auto vid = [m](int ring, int j) { return 1 + (ring - 1) * m + ((j % m + m) % m); };
  for (int r = 1; r <= rings; ++r) {
    const double rad = static_cast<double>(r) / rings;
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * M_PI * j / m;
      coords.push_back({rad * std::cos(th), rad * std::sin(th)});
    }
  }
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < m; ++j) cells.push_back({0, vid(1, j), vid(1, j + 1)});
  for (int r = 1; r < rings; ++r)
    for (int j = 0; j < m; ++j) {
      cells.push_back({vid(r, j), vid(r + 1, j), vid(r + 1, j + 1)});
      cells.push_back({vid(r, j), vid(r, j + 1), vid(r + 1, j + 1)});
    }
  auto K = make_complex(2, coords, cells);
  for (int j = 0; j < m; ++j) {
    const int e = K.index_of(1, {vid(rings, j), vid(rings, j + 1)});
    K.boundary.insert({1, e});
  }
  K.close_under_faces(K.boundary);
  if (stratify) {
    K.strata.assign(2, {});
    K.strata[1] = K.boundary;
  }
  return K;
}

StratifiedComplex sphere_mesh(int subdiv) {
  std::vector<std::vector<double>> coords = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                             {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
  std::vector<std::vector<int>> tris = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                        {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  for (int s = 0; s < subdiv; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      if (a > b) std::swap(a, b);
      auto it = mid.find({a, b});
      if (it != mid.end()) return it->second;
      std::vector<double> c(3);
      double norm = 0.0;
      for (int k = 0; k < 3; ++k) c[k] = 0.5 * (coords[a][k] + coords[b][k]);
      for (int k = 0; k < 3; ++k) norm += c[k] * c[k];
      norm = std::sqrt(norm);
      for (int k = 0; k < 3; ++k) c[k] /= norm;
      coords.push_back(c);
      const int id = static_cast<int>(coords.size()) - 1;
      mid[{a, b}] = id;
      return id;
    };
    std::vector<std::vector<int>> next;
    for (const auto& t : tris) {
      const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ac = midpoint(t[0], t[2]);
      next.push_back({t[0], ab, ac});
      next.push_back({t[1], ab, bc});
      next.push_back({t[2], ac, bc});
      next.push_back({ab, bc, ac});
    }
    tris = std::move(next);
  }
  return make_complex(2, coords, tris);
}

StratifiedComplex spindle_mesh(int m) {
  if (m < 3) throw std::invalid_argument("spindle_mesh: m >= 3");
  std::vector<std::vector<double>> coords;
  for (int j = 0; j < m; ++j) {
    const double th = 2.0 * M_PI * j / m;
    coords.push_back({std::cos(th), std::sin(th), 0.0});
  }
  coords.push_back({0.0, 0.0, 1.0});   // north
  coords.push_back({0.0, 0.0, -1.0});  // south
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < m; ++j) {
    cells.push_back({j, (j + 1) % m, m});
    cells.push_back({j, (j + 1) % m, m + 1});
  }
  auto K = make_complex(2, coords, cells);
  K.strata.assign(2, {});
  K.strata[0] = {{0, K.index_of(0, {m})}, {0, K.index_of(0, {m + 1})}};
  K.strata[1] = K.strata[0];
  return K;
}

StratifiedComplex csaszar_torus() {
  std::vector<std::vector<int>> tris;
  for (int i = 0; i < 7; ++i) {
    tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
    tris.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  auto K = make_complex(2, {}, tris);
  for (int i = 0; i < K.count(1); ++i) {
    const auto& e = K.simp[1][i];
    K.length_override[{e[0], e[1]}] = 1.0;
  }
  return K;
}

StratifiedComplex cone_over(const StratifiedComplex& base, double height) {
  if (!(height > 0.0)) throw std::invalid_argument("cone_over: height > 0");
  const int apex = base.vertex_count();
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < base.count(base.dim); ++i) {
    auto cell = base.simp[base.dim][i];
    cell.push_back(apex);
    cells.push_back(cell);
  }
  auto K = make_complex(base.dim + 1, {}, cells);
  K.length_override = base.length_override;
  if (!base.coords.empty())
    for (int u = 0; u < apex; ++u)
      for (int v = u + 1; v < apex; ++v)
        if (K.index_of(1, {u, v}) >= 0 && !K.length_override.count({u, v}))
          K.length_override[{u, v}] = base.edge_length(u, v);
  for (int u = 0; u < apex; ++u)
    if (K.index_of(1, {u, apex}) >= 0) K.length_override[{u, apex}] = height;

  const int n = K.dim;
  K.strata.assign(n, {});
  K.strata[0] = {{0, K.index_of(0, {apex})}};
  for (int j = 1; j < n; ++j) K.strata[j] = K.strata[0];
  // lid = the base, a codimension-one stratum of the compact truncated cone
  std::set<std::pair<int, int>> lid;
  for (int p = 0; p <= base.dim; ++p)
    for (int i = 0; i < base.count(p); ++i) lid.insert({p, K.index_of(p, base.simp[p][i])});
  K.strata[n - 1].insert(lid.begin(), lid.end());
  K.boundary = lid;
  return K;
}

StratifiedComplex graph_complex(const MetricGraph& g) {
  g.validate();
  std::map<std::string, int> vidx;
  std::vector<std::vector<int>> cells;
  std::map<std::pair<int, int>, double> lens;
  for (const auto& v : g.vertices) vidx[v] = static_cast<int>(vidx.size());
  int extra = static_cast<int>(vidx.size());
  for (const auto& e : g.edges) {
    const int a = vidx[e.tail], b = vidx[e.head];
    const int m1 = extra++, m2 = extra++;
    for (auto [u, v] : {std::pair{a, m1}, std::pair{m1, m2}, std::pair{m2, b}}) {
      cells.push_back({u, v});
      if (u > v) std::swap(u, v);
      lens[{u, v}] = e.length / 3.0;
    }
  }
  auto K = make_complex(1, {}, cells);
  K.length_override = std::move(lens);
  return K;
}

}  // namespace mesh_gen
}  // namespace stratspec

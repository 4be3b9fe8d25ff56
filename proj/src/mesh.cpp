#include "stratspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stratspec {

namespace {

std::vector<std::vector<int>> proper_faces(const std::vector<int>& s) {
  std::vector<std::vector<int>> out;
  if (s.size() <= 1) return out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::vector<int> f;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != k) f.push_back(s[j]);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

int StratifiedComplex::index_of(int p, const std::vector<int>& vertices) const {
  if (p < 0 || p > dim) return -1;
  std::vector<int> key = vertices;
  std::sort(key.begin(), key.end());
  auto it = std::lower_bound(simp[p].begin(), simp[p].end(), key);
  if (it == simp[p].end() || *it != key) return -1;
  return static_cast<int>(it - simp[p].begin());
}

double StratifiedComplex::edge_length(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = length_override.find({u, v});
  if (it != length_override.end()) return it->second;
  if (coords.empty())
    throw std::runtime_error("edge_length: no coordinates and no override for edge (" +
                             std::to_string(u) + "," + std::to_string(v) + ")");
  double s = 0.0;
  for (std::size_t c = 0; c < coords[u].size(); ++c) {
    const double d = coords[u][c] - coords[v][c];
    s += d * d;
  }
  return std::sqrt(s);
}

void StratifiedComplex::close_under_faces(std::set<std::pair<int, int>>& cells) const {
  std::vector<std::pair<int, int>> todo(cells.begin(), cells.end());
  while (!todo.empty()) {
    auto [p, i] = todo.back();
    todo.pop_back();
    if (p == 0) continue;
    for (const auto& f : proper_faces(simp[p][i])) {
      const int fi = index_of(p - 1, f);
      if (fi < 0) throw std::runtime_error("close_under_faces: missing face");
      if (cells.insert({p - 1, fi}).second) todo.push_back({p - 1, fi});
    }
  }
}

void StratifiedComplex::validate() const {
  if (dim < 0 || static_cast<int>(simp.size()) != dim + 1)
    throw std::invalid_argument("complex: simplex table does not match dim");
  const int nv = vertex_count();
  if (!coords.empty() && static_cast<int>(coords.size()) != nv)
    throw std::invalid_argument("complex: coordinate count != vertex count");
  for (int p = 0; p <= dim; ++p) {
    for (const auto& s : simp[p]) {
      if (static_cast<int>(s.size()) != p + 1)
        throw std::invalid_argument("complex: simplex arity mismatch");
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] < 0 || s[j] >= nv)
          throw std::invalid_argument("complex: vertex index " + std::to_string(s[j]) +
                                      " out of range");
        if (j > 0 && s[j] <= s[j - 1])
          throw std::invalid_argument("complex: simplex vertices not strictly ascending");
      }
      if (p > 0)
        for (const auto& f : proper_faces(s))
          if (index_of(p - 1, f) < 0) throw std::invalid_argument("complex: missing face");
    }
    if (!std::is_sorted(simp[p].begin(), simp[p].end()))
      throw std::invalid_argument("complex: simplices not in lexicographic order");
  }
  // metric sanity on triangles
  if (dim >= 2) {
    for (const auto& t : simp[2]) {
      const double a = edge_length(t[0], t[1]);
      const double b = edge_length(t[0], t[2]);
      const double c = edge_length(t[1], t[2]);
      if (!(a + b > c && a + c > b && b + c > a))
        throw std::invalid_argument("complex: triangle inequality violated");
    }
  }
  for (const auto& [key, L] : length_override)
    if (key.first >= key.second || L <= 0.0)
      throw std::invalid_argument("complex: bad length override");
  // strata: nested subcomplexes
  if (!strata.empty() && static_cast<int>(strata.size()) != dim)
    throw std::invalid_argument("complex: strata must have dim levels");
  for (std::size_t j = 0; j < strata.size(); ++j) {
    auto closed = strata[j];
    close_under_faces(closed);
    if (closed != strata[j])
      throw std::invalid_argument("complex: stratum not closed under faces");
    if (j > 0)
      for (const auto& c : strata[j - 1])
        if (!strata[j].count(c)) throw std::invalid_argument("complex: strata not nested");
    for (const auto& [p, i] : strata[j]) {
      if (p > static_cast<int>(j))
        throw std::invalid_argument("complex: stratum X_" + std::to_string(j) +
                                    " contains a higher-dimensional simplex");
      if (i < 0 || i >= count(p)) throw std::invalid_argument("complex: stratum index range");
    }
  }
  {
    auto closed = boundary;
    close_under_faces(closed);
    if (closed != boundary)
      throw std::invalid_argument("complex: boundary not closed under faces");
  }
  // orientability of the codimension-zero part: propagate orientations across
  // interior shared facets and reject any inconsistency
  if (dim >= 1 && count(dim) > 0) {
    const int nt = count(dim);
    std::vector<std::vector<std::pair<int, int>>> cofaces(count(dim - 1));
    for (int t = 0; t < nt; ++t) {
      const auto faces = proper_faces(simp[dim][t]);
      for (std::size_t k = 0; k < faces.size(); ++k) {
        const int fi = index_of(dim - 1, faces[k]);
        cofaces[fi].push_back({t, (k % 2) ? -1 : 1});
      }
    }
    std::vector<int> orient(nt, 0);
    for (int seed = 0; seed < nt; ++seed) {
      if (orient[seed] != 0) continue;
      orient[seed] = 1;
      std::vector<int> stack = {seed};
      while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        const auto faces = proper_faces(simp[dim][t]);
        for (std::size_t k = 0; k < faces.size(); ++k) {
          const int fi = index_of(dim - 1, faces[k]);
          if (cofaces[fi].size() != 2) continue;
          for (const auto& [t2, sgn2] : cofaces[fi]) {
            if (t2 == t) continue;
            int sgn1 = (k % 2) ? -1 : 1;
            // consistent orientation: the two induced facet orientations cancel
            const int want = -orient[t] * sgn1 * sgn2;
            if (orient[t2] == 0) {
              orient[t2] = want;
              stack.push_back(t2);
            } else if (orient[t2] != want) {
              throw std::invalid_argument("complex: top stratum is not orientable");
            }
          }
        }
      }
    }
  }
}

StratifiedComplex make_complex(int dim, const std::vector<std::vector<double>>& coords,
                               const std::vector<std::vector<int>>& cells) {
  StratifiedComplex K;
  K.dim = dim;
  K.coords = coords;
  K.simp.assign(dim + 1, {});
  std::vector<std::set<std::vector<int>>> seen(dim + 1);
  std::function<void(std::vector<int>)> add = [&](std::vector<int> s) {
    std::sort(s.begin(), s.end());
    const int p = static_cast<int>(s.size()) - 1;
    if (p > dim) throw std::invalid_argument("make_complex: cell dimension exceeds dim");
    if (!seen[p].insert(s).second) return;
    for (auto& f : proper_faces(s)) add(f);
  };
  for (const auto& cell : cells) add(cell);
  // every vertex referenced must exist; add isolated coordinate vertices too
  for (int v = 0; v < static_cast<int>(coords.size()); ++v) seen[0].insert({v});
  for (int p = 0; p <= dim; ++p) K.simp[p].assign(seen[p].begin(), seen[p].end());
  return K;
}

StratifiedComplex barycentric_subdivide(const StratifiedComplex& K) {
  // global id of simplex (p, i), ordered by dimension then index
  std::vector<int> offset(K.dim + 2, 0);
  for (int p = 0; p <= K.dim; ++p) offset[p + 1] = offset[p] + K.count(p);
  const int n_cells = offset[K.dim + 1];
  auto gid = [&](int p, int i) { return offset[p] + i; };

  StratifiedComplex S;
  S.dim = K.dim;
  S.simp.assign(K.dim + 1, {});
  if (!K.coords.empty()) {
    S.coords.assign(n_cells, std::vector<double>(K.coords[0].size(), 0.0));
    for (int p = 0; p <= K.dim; ++p)
      for (int i = 0; i < K.count(p); ++i)
        for (int v : K.simp[p][i])
          for (std::size_t c = 0; c < K.coords[v].size(); ++c)
            S.coords[gid(p, i)][c] += K.coords[v][c] / (p + 1.0);
  }

  // chains sigma_0 < sigma_1 < ... of proper faces (of any codimension);
  // every chain is a simplex
  std::vector<std::vector<std::vector<int>>> chains(K.dim + 1);
  std::function<void(int, int, std::vector<int>&)> descend = [&](int p, int i,
                                                                 std::vector<int>& chain) {
    chain.push_back(gid(p, i));
    std::vector<int> rev(chain.rbegin(), chain.rend());
    chains[static_cast<int>(chain.size()) - 1].push_back(rev);
    const auto& vtx = K.simp[p][i];
    for (int q = 0; q < p; ++q) {
      // all (q+1)-subsets of the vertex list
      std::vector<int> pick(q + 1);
      std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == q + 1) {
          descend(q, K.index_of(q, pick), chain);
          return;
        }
        for (int m = start; m <= p - (q - depth); ++m) {
          pick[depth] = vtx[m];
          choose(m + 1, depth + 1);
        }
      };
      choose(0, 0);
    }
    chain.pop_back();
  };
  for (int p = 0; p <= K.dim; ++p)
    for (int i = 0; i < K.count(p); ++i) {
      std::vector<int> chain;
      descend(p, i, chain);
    }
  for (int p = 0; p <= K.dim; ++p) {
    std::sort(chains[p].begin(), chains[p].end());
    chains[p].erase(std::unique(chains[p].begin(), chains[p].end()), chains[p].end());
    S.simp[p] = std::move(chains[p]);
  }

  auto map_subcomplex = [&](const std::set<std::pair<int, int>>& cells) {
    std::set<int> ids;
    for (const auto& [p, i] : cells) ids.insert(gid(p, i));
    std::set<std::pair<int, int>> out;
    for (int p = 0; p <= S.dim; ++p)
      for (int i = 0; i < S.count(p); ++i) {
        bool inside = true;
        for (int v : S.simp[p][i]) inside = inside && ids.count(v);
        if (inside) out.insert({p, i});
      }
    return out;
  };
  for (const auto& level : K.strata) S.strata.push_back(map_subcomplex(level));
  S.boundary = map_subcomplex(K.boundary);
  return S;
}

StratifiedComplex parse_stratoff(std::istream& in) {
  std::string tok;
  if (!(in >> tok) || tok != "STRATOFF")
    throw std::runtime_error("stratoff: missing STRATOFF header");
  int dim = -1, coorddim = 0, nv = 0;
  StratifiedComplex K;
  std::vector<std::vector<int>> cells;
  std::vector<std::vector<double>> coords;
  auto read_cell_list = [&](int count) {
    std::vector<std::vector<int>> out;
    for (int i = 0; i < count; ++i) {
      int k;
      if (!(in >> k) || k < 1) throw std::runtime_error("stratoff: bad cell arity");
      std::vector<int> s(k);
      for (int j = 0; j < k; ++j)
        if (!(in >> s[j])) throw std::runtime_error("stratoff: truncated cell line");
      out.push_back(std::move(s));
    }
    return out;
  };
  bool built = false;
  auto ensure_built = [&]() {
    if (built) return;
    if (dim < 0) throw std::runtime_error("stratoff: dim must come before cells");
    K = make_complex(dim, coords, cells);
    built = true;
  };
  while (in >> tok) {
    if (tok == "dim") {
      if (!(in >> dim) || dim < 0) throw std::runtime_error("stratoff: bad dim");
    } else if (tok == "coorddim") {
      if (!(in >> coorddim) || coorddim < 0) throw std::runtime_error("stratoff: bad coorddim");
    } else if (tok == "vertices") {
      if (!(in >> nv) || nv < 0) throw std::runtime_error("stratoff: bad vertex count");
      coords.assign(nv, std::vector<double>(coorddim));
      for (int i = 0; i < nv; ++i)
        for (int c = 0; c < coorddim; ++c)
          if (!(in >> coords[i][c])) throw std::runtime_error("stratoff: truncated coordinates");
      if (coorddim == 0) coords.clear();
    } else if (tok == "cells") {
      int nc;
      if (!(in >> nc) || nc < 0) throw std::runtime_error("stratoff: bad cell count");
      for (auto& c : read_cell_list(nc)) {
        for (int v : c)
          if (v < 0 || (nv > 0 && v >= nv))
            throw std::runtime_error("stratoff: cell references vertex index " +
                                     std::to_string(v) + " outside the declared range");
        cells.push_back(std::move(c));
      }
    } else if (tok == "lengths") {
      ensure_built();
      int nl;
      if (!(in >> nl) || nl < 0) throw std::runtime_error("stratoff: bad length count");
      for (int i = 0; i < nl; ++i) {
        int u, v;
        double L;
        if (!(in >> u >> v >> L)) throw std::runtime_error("stratoff: truncated length line");
        if (L <= 0.0) throw std::runtime_error("stratoff: length must be positive");
        if (u > v) std::swap(u, v);
        K.length_override[{u, v}] = L;
      }
    } else if (tok == "strata") {
      ensure_built();
      int nlev;
      if (!(in >> nlev)) throw std::runtime_error("stratoff: bad strata count");
      K.strata.assign(K.dim, {});
      for (int l = 0; l < nlev; ++l) {
        std::string lv;
        int j, cnt;
        if (!(in >> lv >> j >> cnt) || lv != "level" || j < 0 || j >= K.dim)
          throw std::runtime_error("stratoff: bad strata level header");
        for (const auto& s : read_cell_list(cnt)) {
          const int p = static_cast<int>(s.size()) - 1;
          const int idx = K.index_of(p, s);
          if (idx < 0) throw std::runtime_error("stratoff: stratum cell not in complex");
          K.strata[j].insert({p, idx});
        }
      }
      for (int j = 0; j < K.dim; ++j) {
        K.close_under_faces(K.strata[j]);
        if (j > 0) K.strata[j].insert(K.strata[j - 1].begin(), K.strata[j - 1].end());
      }
    } else if (tok == "boundary") {
      ensure_built();
      int cnt;
      if (!(in >> cnt)) throw std::runtime_error("stratoff: bad boundary count");
      for (const auto& s : read_cell_list(cnt)) {
        const int p = static_cast<int>(s.size()) - 1;
        const int idx = K.index_of(p, s);
        if (idx < 0) throw std::runtime_error("stratoff: boundary cell not in complex");
        K.boundary.insert({p, idx});
      }
      K.close_under_faces(K.boundary);
    } else {
      throw std::runtime_error("stratoff: unknown block '" + tok + "'");
    }
  }
  ensure_built();
  K.validate();
  return K;
}

void emit_stratoff(const StratifiedComplex& K, std::ostream& out) {
  out << "STRATOFF\n";
  out << "dim " << K.dim << "\n";
  out << "coorddim " << (K.coords.empty() ? 0 : K.coords[0].size()) << "\n";
  out << "vertices " << K.vertex_count() << "\n";
  out.precision(17);
  for (const auto& c : K.coords) {
    for (std::size_t j = 0; j < c.size(); ++j) out << (j ? " " : "") << c[j];
    out << "\n";
  }
  // top simplices plus any cell with no coface (keeps non-pure complexes intact)
  std::set<std::pair<int, int>> covered;
  std::vector<std::vector<int>> cells;
  for (int p = K.dim; p >= 0; --p)
    for (int i = 0; i < K.count(p); ++i) {
      if (covered.count({p, i})) continue;
      cells.push_back(K.simp[p][i]);
      std::set<std::pair<int, int>> self = {{p, i}};
      K.close_under_faces(self);
      covered.insert(self.begin(), self.end());
    }
  out << "cells " << cells.size() << "\n";
  for (const auto& s : cells) {
    out << s.size();
    for (int v : s) out << " " << v;
    out << "\n";
  }
  if (!K.length_override.empty()) {
    out << "lengths " << K.length_override.size() << "\n";
    for (const auto& [e, L] : K.length_override)
      out << e.first << " " << e.second << " " << L << "\n";
  }
  if (!K.strata.empty()) {
    out << "strata " << K.strata.size() << "\n";
    for (std::size_t j = 0; j < K.strata.size(); ++j) {
      out << "level " << j << " " << K.strata[j].size() << "\n";
      for (const auto& [p, i] : K.strata[j]) {
        out << p + 1;
        for (int v : K.simp[p][i]) out << " " << v;
        out << "\n";
      }
    }
  }
  if (!K.boundary.empty()) {
    out << "boundary " << K.boundary.size() << "\n";
    for (const auto& [p, i] : K.boundary) {
      out << p + 1;
      for (int v : K.simp[p][i]) out << " " << v;
      out << "\n";
    }
  }
}

}  // namespace stratspec

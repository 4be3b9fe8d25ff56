#include "stratspec/strata_ih.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "stratspec/graph_laplace.hpp"

namespace stratspec {
namespace strata_ih {

namespace {

using Rat = boost::multiprecision::cpp_rational;

/// Rank over the rationals of the span of sparse vectors, by elimination
/// with shortest-vector pivoting (the vectors here are simplicial boundary
/// chains, so fill-in stays small).
int rational_rank(std::vector<std::map<int, Rat>> rows) {
  int rank = 0;
  std::vector<bool> used(rows.size(), false);
  for (;;) {
    int pivot = -1;
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (used[i] || rows[i].empty()) continue;
      if (pivot < 0 || rows[i].size() < best) {
        pivot = static_cast<int>(i);
        best = rows[i].size();
      }
    }
    if (pivot < 0) break;
    used[pivot] = true;
    ++rank;
    const int col = rows[pivot].begin()->first;
    const Rat pval = rows[pivot].begin()->second;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (used[i]) continue;
      auto it = rows[i].find(col);
      if (it == rows[i].end()) continue;
      const Rat factor = it->second / pval;
      for (const auto& [c, v] : rows[pivot]) {
        auto jt = rows[i].find(c);
        if (jt == rows[i].end()) {
          rows[i][c] = -factor * v;
        } else {
          jt->second -= factor * v;
          if (jt->second == 0) rows[i].erase(jt);
        }
      }
    }
  }
  return rank;
}

std::vector<std::set<int>> level_vertex_sets(const StratifiedComplex& K) {
  std::vector<std::set<int>> out(K.strata.size());
  for (std::size_t j = 0; j < K.strata.size(); ++j)
    for (const auto& [p, idx] : K.strata[j])
      if (p == 0) out[j].insert(idx);
  return out;
}

bool allowable_with_sets(const StratifiedComplex& K, const std::vector<std::set<int>>& verts,
                         int p, int index, const Perversity& pv) {
  const auto& simplex = K.simp[p][index];
  for (std::size_t j = 0; j < verts.size(); ++j) {
    if (K.strata[j].empty()) continue;
    int hit = 0;
    for (int v : simplex)
      if (verts[j].count(v)) ++hit;
    if (hit == 0) continue;
    const int k = K.dim - static_cast<int>(j);
    if (hit - 1 > p - k + pv.at(k)) return false;
  }
  return true;
}

struct LinkClass {
  enum Kind { kCycle, kPath, kSingular } kind = kSingular;
};

/// Classify a multigraph given as a list of (unordered) edges on integer
/// labels: a single cycle, a single path, or anything else.
LinkClass::Kind classify_link_graph(const std::vector<std::pair<int, int>>& edges) {
  if (edges.empty()) return LinkClass::kSingular;
  std::map<int, int> degree;
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : edges) {
    if (!parent.count(a)) parent[a] = a;
    if (!parent.count(b)) parent[b] = b;
    ++degree[a];
    ++degree[b];
    parent[find(a)] = find(b);
  }
  int roots = 0;
  for (const auto& [v, p] : parent)
    if (find(v) == v) ++roots;
  if (roots != 1) return LinkClass::kSingular;
  int deg1 = 0;
  for (const auto& [v, d] : degree) {
    if (d == 1)
      ++deg1;
    else if (d != 2)
      return LinkClass::kSingular;
  }
  if (deg1 == 0) return LinkClass::kCycle;
  if (deg1 == 2) return LinkClass::kPath;
  return LinkClass::kSingular;
}

[[noreturn]] void bad_link(int p, const std::vector<int>& simplex) {
  std::ostringstream msg;
  msg << "stratify_multiconical: link of " << p << "-simplex (";
  for (std::size_t i = 0; i < simplex.size(); ++i) msg << (i ? " " : "") << simplex[i];
  msg << ") is not multiconical";
  throw std::runtime_error(msg.str());
}

}  // namespace

int Perversity::at(int k) const {
  if (k < 0 || k >= static_cast<int>(values.size()))
    throw std::out_of_range("Perversity: codimension outside the stored range");
  return values[k];
}

void Perversity::validate() const {
  if (values.empty()) throw std::invalid_argument("Perversity: empty");
  if (values[0] != 0) throw std::invalid_argument("Perversity: p(0) must be 0");
  for (std::size_t k = 1; k < values.size(); ++k) {
    const int step = values[k] - values[k - 1];
    if (step != 0 && step != 1)
      throw std::invalid_argument("Perversity: increments must be 0 or 1");
  }
}

Perversity gm_perversity(int n) {
  if (n < 0) throw std::invalid_argument("gm_perversity: n >= 0");
  Perversity pv;
  pv.values.resize(n + 1, 0);
  for (int k = 1; k <= n; ++k) pv.values[k] = (k - 1) / 2;
  pv.validate();
  return pv;
}

StratifiedComplex stratify_multiconical(const StratifiedComplex& K) {
  K.validate();
  for (const auto& level : K.strata)
    if (!level.empty()) return K;  // already stratified

  StratifiedComplex out = K;
  out.strata.assign(std::max(K.dim, 1), {});
  const int n = K.dim;
  if (n == 0) return out;
  if (n > 3)
    throw std::invalid_argument(
        "stratify_multiconical: link classification implemented for dim <= 3");

  if (n == 1) {
    std::vector<int> valence(K.vertex_count(), 0);
    for (const auto& e : K.simp[1]) {
      ++valence[e[0]];
      ++valence[e[1]];
    }
    for (int v = 0; v < K.vertex_count(); ++v)
      if (valence[v] != 2) out.strata[0].insert({0, v});
    return out;
  }

  if (n == 2) {
    // edges: interior iff two triangle cofaces, boundary iff one
    std::vector<int> cofaces(K.count(1), 0);
    for (const auto& t : K.simp[2])
      for (int drop = 0; drop < 3; ++drop) {
        std::vector<int> e;
        for (int i = 0; i < 3; ++i)
          if (i != drop) e.push_back(t[i]);
        ++cofaces[K.index_of(1, e)];
      }
    for (int e = 0; e < K.count(1); ++e) {
      if (cofaces[e] == 0) bad_link(1, K.simp[1][e]);
      if (cofaces[e] != 2) out.strata[1].insert({1, e});
    }
    // vertices: link graph from opposite edges of incident triangles
    for (int v = 0; v < K.vertex_count(); ++v) {
      std::vector<std::pair<int, int>> link;
      for (const auto& t : K.simp[2])
        if (std::find(t.begin(), t.end(), v) != t.end()) {
          std::vector<int> rest;
          for (int u : t)
            if (u != v) rest.push_back(u);
          link.emplace_back(rest[0], rest[1]);
        }
      const auto kind = classify_link_graph(link);
      if (kind == LinkClass::kSingular) out.strata[0].insert({0, v});
    }
  } else {  // n == 3
    std::vector<int> tri_cofaces(K.count(2), 0);
    for (const auto& t : K.simp[3])
      for (int drop = 0; drop < 4; ++drop) {
        std::vector<int> f;
        for (int i = 0; i < 4; ++i)
          if (i != drop) f.push_back(t[i]);
        ++tri_cofaces[K.index_of(2, f)];
      }
    for (int f = 0; f < K.count(2); ++f) {
      if (tri_cofaces[f] == 0) bad_link(2, K.simp[2][f]);
      if (tri_cofaces[f] != 2) out.strata[2].insert({2, f});
    }
    // edges: link graph on the opposite edges of incident tetrahedra
    for (int e = 0; e < K.count(1); ++e) {
      const int u = K.simp[1][e][0], w = K.simp[1][e][1];
      std::vector<std::pair<int, int>> link;
      for (const auto& t : K.simp[3]) {
        if (std::find(t.begin(), t.end(), u) == t.end()) continue;
        if (std::find(t.begin(), t.end(), w) == t.end()) continue;
        std::vector<int> rest;
        for (int x : t)
          if (x != u && x != w) rest.push_back(x);
        link.emplace_back(rest[0], rest[1]);
      }
      if (classify_link_graph(link) == LinkClass::kSingular) out.strata[1].insert({1, e});
    }
    // vertices: Euler characteristic of the link surface
    for (int v = 0; v < K.vertex_count(); ++v) {
      std::set<int> lv;
      std::set<std::pair<int, int>> le;
      int lf = 0;
      for (const auto& t : K.simp[3]) {
        if (std::find(t.begin(), t.end(), v) == t.end()) continue;
        std::vector<int> rest;
        for (int x : t)
          if (x != v) rest.push_back(x);
        ++lf;
        for (int x : rest) lv.insert(x);
        le.insert({std::min(rest[0], rest[1]), std::max(rest[0], rest[1])});
        le.insert({std::min(rest[0], rest[2]), std::max(rest[0], rest[2])});
        le.insert({std::min(rest[1], rest[2]), std::max(rest[1], rest[2])});
      }
      const int chi = static_cast<int>(lv.size()) - static_cast<int>(le.size()) + lf;
      if (chi != 2 && chi != 1) out.strata[0].insert({0, v});
    }
  }

  // enforce nesting and face closure
  for (std::size_t j = 1; j < out.strata.size(); ++j)
    out.strata[j].insert(out.strata[j - 1].begin(), out.strata[j - 1].end());
  for (auto& level : out.strata) out.close_under_faces(level);
  out.validate();
  return out;
}

bool allowable(const StratifiedComplex& K, int p, int index, const Perversity& pv) {
  if (p < 0 || p > K.dim || index < 0 || index >= K.count(p))
    throw std::out_of_range("allowable: simplex out of range");
  return allowable_with_sets(K, level_vertex_sets(K), p, index, pv);
}

IHResult ih_betti(const StratifiedComplex& K, const Perversity& pv) {
  K.validate();
  pv.validate();
  const int n = K.dim;
  if (static_cast<int>(pv.values.size()) < n + 1)
    throw std::invalid_argument("ih_betti: perversity must cover codimensions 0..dim");

  const StratifiedComplex S = barycentric_subdivide(K);
  const auto verts = level_vertex_sets(S);

  std::vector<std::vector<int>> allowed(n + 1);
  std::vector<std::vector<bool>> is_allowed(n + 1);
  for (int p = 0; p <= n; ++p) {
    is_allowed[p].assign(S.count(p), false);
    for (int i = 0; i < S.count(p); ++i)
      if (allowable_with_sets(S, verts, p, i, pv)) {
        allowed[p].push_back(i);
        is_allowed[p][i] = true;
      }
  }

  // IH_p = |A_p| - rank(bd_p on A_p) - rank(bd_{p+1} on A_{p+1})
  //        + rank(bd_{p+1} rows outside A_p on columns A_{p+1})
  std::vector<int> rank_full(n + 2, 0), rank_outside(n + 2, 0);
  for (int p = 1; p <= n; ++p) {
    std::vector<std::map<int, Rat>> chains, outside;
    chains.reserve(allowed[p].size());
    outside.reserve(allowed[p].size());
    for (int s : allowed[p]) {
      std::map<int, Rat> full, off;
      const auto& vtx = S.simp[p][s];
      for (int drop = 0; drop <= p; ++drop) {
        std::vector<int> face;
        for (int i = 0; i <= p; ++i)
          if (i != drop) face.push_back(vtx[i]);
        const int fi = S.index_of(p - 1, face);
        const Rat sign = (drop % 2 == 0) ? 1 : -1;
        full[fi] += sign;
        if (!is_allowed[p - 1][fi]) off[fi] += sign;
      }
      chains.push_back(std::move(full));
      outside.push_back(std::move(off));
    }
    rank_full[p] = rational_rank(std::move(chains));
    rank_outside[p] = rational_rank(std::move(outside));
  }

  IHResult out;
  out.perversity = pv.values;
  for (int p = 0; p <= n; ++p) {
    const int b = static_cast<int>(allowed[p].size()) - rank_full[p] - rank_full[p + 1] +
                  rank_outside[p + 1];
    if (b < 0) throw std::logic_error("ih_betti: negative rank (chain condition violated)");
    out.betti[p] = b;
  }
  std::ostringstream fp;
  fp << "dim=" << n;
  for (std::size_t j = 0; j < K.strata.size(); ++j) fp << " |X_" << j << "|=" << K.strata[j].size();
  fp << " cells=";
  for (int p = 0; p <= n; ++p) fp << (p ? "," : "") << K.count(p);
  out.fingerprint = fp.str();
  return out;
}

std::string CrossCheckReport::table() const {
  std::ostringstream out;
  out << "degree  dim Ker   IH_(n-p)  status\n";
  for (const auto& r : rows)
    out << "  " << r.degree << "       " << r.kernel_dim << "        " << r.ih_rank << " (IH_"
        << r.ih_degree << ")  " << (r.pass ? "pass" : "FAIL") << "\n";
  out << (pass ? "overall: pass" : "overall: FAIL") << "\n";
  return out.str();
}

CrossCheckReport hodge_cross_check(const std::vector<int>& kernel_dims, const IHResult& ih) {
  if (kernel_dims.empty()) throw std::invalid_argument("hodge_cross_check: no kernel dimensions");
  const int n = static_cast<int>(kernel_dims.size()) - 1;
  CrossCheckReport rep;
  for (int p = 0; p <= n; ++p) {
    CrossCheckRow row;
    row.degree = p;
    row.kernel_dim = kernel_dims[p];
    row.ih_degree = n - p;
    auto it = ih.betti.find(n - p);
    row.ih_rank = (it == ih.betti.end()) ? 0 : it->second;
    row.pass = (row.kernel_dim == row.ih_rank);
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<int> graph_kernel_dims(const MetricGraph& g, double gap_tol) {
  g.validate();
  // degree 0: widen the secular window until a positive eigenvalue shows up,
  // then count the zero cluster against the spectral gap
  double hi = 1.0;
  int zero_dim = 0;
  for (int round = 0;; ++round) {
    auto res = graph_laplace::secular_spectrum_0(g, -1.0, hi, 1e-10);
    bool has_positive = false;
    for (double l : res.flattened())
      if (l >= gap_tol) has_positive = true;
    if (has_positive) {
      zero_dim = kernel_dimension(res, gap_tol);
      break;
    }
    if (round == 24) throw std::runtime_error("graph_kernel_dims: no positive eigenvalue found");
    hi *= 2.0;
  }
  // degree 1: harmonic one-forms are edgewise constant with matching values
  // around each vertex, one dimension per connected component
  return {zero_dim, g.component_count()};
}

}  // namespace strata_ih
}  // namespace stratspec

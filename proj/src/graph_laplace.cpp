#include "stratspec/graph_laplace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace stratspec {
namespace graph_laplace {

namespace {

// Edgewise ansatz f_e(s) = a C(s) + b S(s) with C = cos(w s), S = sin(w s)/w
// (limits 1 and s at w = 0).  Unknown layout: edge e -> columns (2e, 2e+1).
struct SecularMatrix {
  const MetricGraph& g;
  std::vector<char> neumann;  // per vertex

  SecularMatrix(const MetricGraph& graph, const std::set<std::string>& neumann_ids) : g(graph) {
    neumann.assign(g.vertices.size(), 0);
    for (const auto& id : neumann_ids) neumann[g.vertex_index(id)] = 1;
  }

  Eigen::MatrixXd assemble(double w) const {
    const int ne = static_cast<int>(g.edges.size());
    const int cols = 2 * ne;
    // derivative rows are scaled by 1/max(1,w) to keep row norms comparable
    const double ds = 1.0 / std::max(1.0, w);

    std::vector<Eigen::RowVectorXd> rows;
    for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
      const std::string& vid = g.vertices[vi];
      // endpoint slots at v: (edge, at_head)
      std::vector<std::pair<int, bool>> slots;
      for (int e = 0; e < ne; ++e) {
        if (g.edges[e].tail == vid) slots.emplace_back(e, false);
        if (g.edges[e].head == vid) slots.emplace_back(e, true);
      }
      auto value_row = [&](int e, bool at_head, double sign) {
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(cols);
        const double L = g.edges[e].length;
        if (at_head) {
          r(2 * e) = sign * std::cos(w * L);
          r(2 * e + 1) = sign * (w == 0.0 ? L : std::sin(w * L) / w);
        } else {
          r(2 * e) = sign;
        }
        return r;
      };
      auto deriv_row = [&](int e, bool at_head, double sign) {
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(cols);
        const double L = g.edges[e].length;
        if (at_head) {
          r(2 * e) = sign * ds * (-w * std::sin(w * L));
          r(2 * e + 1) = sign * ds * std::cos(w * L);
        } else {
          r(2 * e + 1) = sign * ds;
        }
        return r;
      };
      if (neumann[vi]) {
        for (auto [e, at_head] : slots) rows.push_back(deriv_row(e, at_head, 1.0));
      } else {
        // balance: sum_in f_e(v) = sum_out f_e(v)
        Eigen::RowVectorXd bal = Eigen::RowVectorXd::Zero(cols);
        for (auto [e, at_head] : slots) bal += value_row(e, at_head, at_head ? 1.0 : -1.0);
        rows.push_back(bal);
        // oriented derivative common to all adjoining endpoints
        for (std::size_t j = 1; j < slots.size(); ++j)
          rows.push_back(deriv_row(slots[j].first, slots[j].second, 1.0) -
                         deriv_row(slots[0].first, slots[0].second, 1.0));
      }
    }
    Eigen::MatrixXd m(static_cast<int>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<int>(i)) = rows[i];
    return m;
  }

  double sigma_min(double w) const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(assemble(w));
    return svd.singularValues().tail(1)(0);
  }

  // Null-space dimension with the relative singular-value cutoff.
  int nullity(double w) const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(assemble(w));
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-8 * std::max(sv(0), 1.0);
    int n = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) < cutoff) ++n;
    return n;
  }
};

double golden_minimize(const std::function<double(double)>& f, double a, double b, int iters) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - phi * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + phi * (b - a); f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SpectralResult secular_spectrum_0(const MetricGraph& g, double lambda_lo, double lambda_hi,
                                  double tol, const std::set<std::string>& neumann_vertices) {
  g.validate();
  if (!(lambda_hi > lambda_lo) || !std::isfinite(lambda_hi))
    throw std::invalid_argument("secular_spectrum_0: search interval must be bounded");
  if (!(tol > 0.0)) throw std::invalid_argument("secular_spectrum_0: tol must be positive");

  SecularMatrix sm(g, neumann_vertices);
  SpectralResult res;
  res.degree = 0;
  res.method = "secular";
  res.tolerance = tol;
  {
    std::ostringstream d;
    d << "edges=" << g.edges.size() << " interval=[" << lambda_lo << "," << lambda_hi << "]";
    res.discretization = d.str();
  }

  int k = 1;
  if (lambda_lo <= 0.0) {
    const int m = sm.nullity(0.0);
    if (m > 0) {
      res.eigenvalues.push_back({k, 0.0, m, sm.sigma_min(0.0)});
      k += m;
    }
  }

  const double w_lo = std::sqrt(std::max(lambda_lo, 0.0));
  const double w_hi = std::sqrt(lambda_hi);
  const double delta = M_PI / (8.0 * g.total_length());
  std::vector<double> ws, sv;
  for (double w = std::max(w_lo, 0.5 * delta); w <= w_hi + delta; w += delta) {
    ws.push_back(w);
    sv.push_back(sm.sigma_min(w));
  }

  std::vector<double> roots;
  for (std::size_t i = 1; i + 1 < ws.size(); ++i) {
    if (sv[i] <= sv[i - 1] && sv[i] <= sv[i + 1]) {
      double w = golden_minimize([&](double x) { return sm.sigma_min(x); },
                                 ws[i - 1], ws[i + 1], 90);
      if (w < 3.0 * delta && lambda_lo <= 0.0) continue;  // zero cluster handled above
      if (sm.sigma_min(w) < 1e-8) roots.push_back(w);
    }
  }
  std::sort(roots.begin(), roots.end());

  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double w = roots[i];
    if (!res.eigenvalues.empty()) {
      // clustered roots below resolution are merged
      const double prev = res.eigenvalues.back().lambda;
      if (std::abs(w * w - prev) < 1e-9 * std::max(1.0, prev)) {
        res.eigenvalues.back().merged = true;
        continue;
      }
    }
    const int m = sm.nullity(w);
    if (m == 0) continue;  // spurious minimum
    const double lam = w * w;
    if (lam < lambda_lo || lam > lambda_hi) continue;
    res.eigenvalues.push_back({k, lam, m, sm.sigma_min(w)});
    k += m;
  }
  res.check_sorted();
  return res;
}

SpectralResult fem_spectrum_0(const MetricGraph& g, int nodes_per_edge, int count,
                              const std::set<std::string>& neumann_vertices) {
  g.validate();
  if (nodes_per_edge < 2) throw std::invalid_argument("fem_spectrum_0: nodes_per_edge >= 2");
  const int ne = static_cast<int>(g.edges.size());
  const int n = nodes_per_edge;
  const int ndof = ne * n;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ndof, ndof);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ndof, ndof);
  for (int e = 0; e < ne; ++e) {
    const double h = g.edges[e].length / (n - 1);
    const int base = e * n;
    for (int i = 0; i + 1 < n; ++i) {
      A(base + i, base + i) += 1.0 / h;
      A(base + i + 1, base + i + 1) += 1.0 / h;
      A(base + i, base + i + 1) -= 1.0 / h;
      A(base + i + 1, base + i) -= 1.0 / h;
      M(base + i, base + i) += h / 3.0;
      M(base + i + 1, base + i + 1) += h / 3.0;
      M(base + i, base + i + 1) += h / 6.0;
      M(base + i + 1, base + i) += h / 6.0;
    }
  }

  // One balance constraint per non-Neumann vertex; each endpoint DOF appears
  // in exactly one constraint, so eliminating one slot per vertex suffices.
  std::set<std::string> neumann = neumann_vertices;
  std::vector<std::vector<std::pair<int, double>>> constraints;
  for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
    const std::string& vid = g.vertices[vi];
    if (neumann.count(vid)) continue;
    std::vector<std::pair<int, double>> c;
    for (int e = 0; e < ne; ++e) {
      if (g.edges[e].head == vid) c.emplace_back(e * n + n - 1, 1.0);
      if (g.edges[e].tail == vid) c.emplace_back(e * n, -1.0);
    }
    if (!c.empty()) constraints.push_back(std::move(c));
  }

  std::vector<int> eliminated(ndof, -1);  // -> constraint index
  for (std::size_t ci = 0; ci < constraints.size(); ++ci)
    eliminated[constraints[ci][0].first] = static_cast<int>(ci);

  std::vector<int> free_dofs;
  std::vector<int> col_of(ndof, -1);
  for (int i = 0; i < ndof; ++i)
    if (eliminated[i] < 0) {
      col_of[i] = static_cast<int>(free_dofs.size());
      free_dofs.push_back(i);
    }
  const int nfree = static_cast<int>(free_dofs.size());
  if (count > nfree)
    throw std::invalid_argument("fem_spectrum_0: count exceeds constrained-space dimension");

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(ndof, nfree);
  for (int i = 0; i < ndof; ++i) {
    if (eliminated[i] < 0) {
      P(i, col_of[i]) = 1.0;
    } else {
      const auto& c = constraints[eliminated[i]];
      const double c0 = c[0].second;
      for (std::size_t j = 1; j < c.size(); ++j)
        P(i, col_of[c[j].first]) += -c[j].second / c0;
    }
  }

  const Eigen::MatrixXd K = P.transpose() * A * P;
  const Eigen::MatrixXd Mc = P.transpose() * M * P;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Mc);
  if (es.info() != Eigen::Success) throw std::runtime_error("fem_spectrum_0: eigensolver failed");

  SpectralResult res;
  res.degree = 0;
  res.method = "fem_p1";
  res.tolerance = 0.0;
  {
    std::ostringstream d;
    d << "nodes_per_edge=" << n;
    res.discretization = d.str();
  }
  for (int i = 0; i < count; ++i) {
    const Eigen::VectorXd x = P * es.eigenvectors().col(i);
    const double lam = es.eigenvalues()(i);
    const Eigen::VectorXd r = A * x - lam * (M * x);
    const double denom = std::max((A * x).norm(), 1e-300);
    res.eigenvalues.push_back({i + 1, lam, 1, r.norm() / denom});
  }
  return res;
}

namespace {

struct Cubic {
  double c[4] = {0, 0, 0, 0};
  double eval(double s) const { return c[0] + s * (c[1] + s * (c[2] + s * c[3])); }
  double deriv(double s) const { return c[1] + s * (2 * c[2] + s * 3 * c[3]); }
};

// 5-point Gauss-Legendre on [0, L]; exact for the degree-6 integrands here.
double integrate(const std::function<double(double)>& f, double L) {
  static const double xs[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                               0.538469310105683, 0.906179845938664};
  static const double wts[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                                0.478628670499366, 0.236926885056189};
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += wts[i] * f(0.5 * L * (xs[i] + 1.0));
  return acc * 0.5 * L;
}

}  // namespace

double adjointness_defect(const MetricGraph& g, int trials, std::uint64_t seed,
                          const std::string& flip_edge) {
  g.validate();
  if (trials < 1) throw std::invalid_argument("adjointness_defect: trials >= 1");
  const int ne = static_cast<int>(g.edges.size());
  const int flip = flip_edge.empty() ? -1 : g.edge_index(flip_edge);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    // f: random cubics, then one endpoint correction per vertex to restore
    // the balance sum_in f = sum_out f.
    std::vector<Cubic> f(ne);
    for (auto& c : f)
      for (double& x : c.c) x = uni(rng);
    for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
      const std::string& vid = g.vertices[vi];
      double residual = 0.0;
      int slot_edge = -1;
      bool slot_head = false;
      for (int e = 0; e < ne; ++e) {
        const double L = g.edges[e].length;
        if (g.edges[e].head == vid) {
          residual += f[e].eval(L);
          slot_edge = e;
          slot_head = true;
        }
        if (g.edges[e].tail == vid) {
          residual -= f[e].eval(0.0);
          slot_edge = e;
          slot_head = false;
        }
      }
      const double L = g.edges[slot_edge].length;
      if (slot_head) {
        // add alpha * s/L: shifts f(L) by alpha, leaves f(0) alone
        f[slot_edge].c[1] += -residual / L;
      } else {
        // add alpha * (1 - s/L): shifts f(0) by alpha
        f[slot_edge].c[0] += residual;
        f[slot_edge].c[1] += -residual / L;
      }
    }

    // omega: random cubics corrected to the common oriented endpoint value F_v
    std::vector<double> F(g.vertices.size());
    for (double& x : F) x = uni(rng);
    std::vector<Cubic> om(ne);
    for (auto& c : om)
      for (double& x : c.c) x = uni(rng);
    for (int e = 0; e < ne; ++e) {
      const double L = g.edges[e].length;
      const double want0 = F[g.vertex_index(g.edges[e].tail)];
      double wantL = F[g.vertex_index(g.edges[e].head)];
      if (e == flip) wantL = -wantL;  // broken convention at the incoming endpoint
      const double d0 = want0 - om[e].eval(0.0);
      const double dL = wantL - om[e].eval(L);
      om[e].c[0] += d0;
      om[e].c[1] += (dL - d0) / L;
    }

    double lhs = 0.0, rhs = 0.0;
    for (int e = 0; e < ne; ++e) {
      const double L = g.edges[e].length;
      lhs += integrate([&](double s) { return f[e].deriv(s) * om[e].eval(s); }, L);
      rhs += integrate([&](double s) { return f[e].eval(s) * (-om[e].deriv(s)); }, L);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

std::pair<MetricGraph, std::vector<EdgeProfile>> reverse_edge(
    const MetricGraph& g, const std::string& e, const std::vector<EdgeProfile>& profiles) {
  MetricGraph out = g;
  const int ei = out.edge_index(e);
  std::swap(out.edges[ei].tail, out.edges[ei].head);

  std::vector<EdgeProfile> pout = profiles;
  const double L = g.edges[ei].length;
  for (auto& p : pout) {
    if (p.edge_id != e) continue;
    p.validate();
    EdgeProfile q;
    q.edge_id = p.edge_id;
    for (std::size_t i = p.s.size(); i-- > 0;) {
      q.s.push_back(L - p.s[i]);
      q.values.push_back(-p.values[i]);
    }
    p = std::move(q);
  }
  return {out, pout};
}

}  // namespace graph_laplace
}  // namespace stratspec

#include "stratspec/cone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stratspec/bessel.hpp"
#include "stratspec/graph_laplace.hpp"

namespace stratspec {
namespace cone {

void ConeSpace::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("ConeSpace: eps must be finite and positive");
  if (const auto* ps = std::get_if<PointSetBase>(&base)) {
    for (const auto& row : ps->distances)
      for (double d : row)
        if (d > M_PI + 1e-12)
          throw std::invalid_argument("ConeSpace: base diameter exceeds pi");
  }
  if (const auto* sp = std::get_if<std::vector<double>>(&base)) {
    for (std::size_t i = 0; i < sp->size(); ++i) {
      if ((*sp)[i] < 0.0) throw std::invalid_argument("ConeSpace: base spectrum must be >= 0");
      if (i > 0 && (*sp)[i] < (*sp)[i - 1])
        throw std::invalid_argument("ConeSpace: base spectrum must be ascending");
    }
  }
}

double cone_distance(double t1, double t2, double d_y) {
  if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("cone_distance: radii must be >= 0");
  if (d_y > M_PI + 1e-12)
    throw std::invalid_argument("cone_distance: base distance exceeds pi");
  const double sq = t1 * t1 + t2 * t2 - 2.0 * t1 * t2 * std::cos(d_y);
  return std::sqrt(std::max(sq, 0.0));
}

int CohomologyTable::get(const std::map<int, int>& m, int i) const {
  auto it = m.find(i);
  return it == m.end() ? 0 : it->second;
}

namespace {

int lookup(const std::map<int, int>& m, int i) {
  auto it = m.find(i);
  if (it == m.end()) return 0;
  if (it->second < 0) throw std::invalid_argument("cohomology dimension must be >= 0");
  return it->second;
}

}  // namespace

CohomologyTable cone_l2_cohomology(const std::map<int, int>& base_dims, int k) {
  if (k < 1) throw std::invalid_argument("cone_l2_cohomology: k >= 1");
  CohomologyTable t;
  t.dim = k;
  if (k == 1) {
    t.h[0] = lookup(base_dims, 0);  // reduced H_0 of the finite base
    t.h[1] = 0;
    t.h_c[0] = 0;
    t.h_c[1] = 1;
    return t;
  }
  for (int i = 0; i <= k; ++i) {
    t.h[i] = (2 * i < k) ? lookup(base_dims, i) : 0;
    t.h_c[i] = (2 * i >= k + 2) ? lookup(base_dims, i - 1) : 0;
  }
  return t;
}

CohomologyTable cone_ih(const std::map<int, int>& base_ih, int k) {
  if (k < 1) throw std::invalid_argument("cone_ih: k >= 1");
  CohomologyTable t;
  t.dim = k;
  if (k == 1) {
    t.ih[1] = lookup(base_ih, 0);  // reduced H_0 of the finite base
    t.ih[0] = 0;
    t.ih_c[1] = 0;
    t.ih_c[0] = 1;
    return t;
  }
  for (int j = 0; j <= k; ++j) {
    // IH_{k-i}(CY) = IH_{k-1-i}(Y) when i < k/2, with j = k - i
    t.ih[j] = (2 * (k - j) < k) ? lookup(base_ih, j - 1) : 0;
    // IH_{k-i,c}(CY) = IH_{k-i,c}(Y) when i >= k/2 + 1
    t.ih_c[j] = (2 * (k - j) >= k + 2) ? lookup(base_ih, j) : 0;
  }
  return t;
}

CohomologyTable kunneth_product(const CohomologyTable& cone_table, int ball_dim) {
  if (ball_dim < 0) throw std::invalid_argument("kunneth_product: ball_dim >= 0");
  const int k = cone_table.dim;
  const int n = k + ball_dim;
  CohomologyTable t;
  t.dim = n;
  for (int i = 0; i <= n; ++i) {
    t.h[i] = cone_table.get(cone_table.h, i);
    t.h_c[i] = cone_table.get(cone_table.h_c, i - ball_dim);
    t.ih[i] = cone_table.get(cone_table.ih, i - ball_dim);
    t.ih_c[i] = cone_table.get(cone_table.ih_c, i);
  }
  return t;
}

SpectralResult radial_spectrum(double mu, double eps, int count, double tol) {
  if (mu < 0.0) throw std::invalid_argument("radial_spectrum: mu >= 0");
  if (!(eps > 0.0)) throw std::invalid_argument("radial_spectrum: eps > 0");
  if (count < 1) throw std::invalid_argument("radial_spectrum: count >= 1");
  const double nu = std::sqrt(mu);

  SpectralResult res;
  res.degree = 0;
  res.method = "radial_bessel";
  res.tolerance = tol;
  {
    std::ostringstream d;
    d << "nu=" << nu << " eps=" << eps;
    res.discretization = d.str();
  }
  int k = 1;
  if (mu == 0.0) res.eigenvalues.push_back({k++, 0.0, 1, 0.0});
  const int need = count - static_cast<int>(res.eigenvalues.size());
  if (need > 0) {
    for (double x : bessel_j_prime_roots(nu, need)) {
      const double lam = (x / eps) * (x / eps);
      res.eigenvalues.push_back({k++, lam, 1, std::abs(bessel_j_prime(nu, x))});
    }
  }
  return res;
}

SpectralResult cone_graph_spectrum(const ConeBase& base, double eps, int count) {
  if (count < 1) throw std::invalid_argument("cone_graph_spectrum: count >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("cone_graph_spectrum: eps > 0");

  if (const auto* ps = std::get_if<PointSetBase>(&base)) {
    // star of m segments; cone point keeps the metric-graph vertex
    // conditions, lid vertices get the absolute (Neumann) condition
    if (ps->count < 1) throw std::invalid_argument("cone_graph_spectrum: empty base");
    MetricGraph star;
    star.vertices.push_back("apex");
    std::set<std::string> lids;
    for (int i = 0; i < ps->count; ++i) {
      const std::string lid = "lid" + std::to_string(i);
      star.vertices.push_back(lid);
      lids.insert(lid);
      star.edges.push_back({"e" + std::to_string(i), "apex", lid, eps});
    }
    double hi = std::pow((count + 2) * M_PI / eps, 2);
    for (;;) {
      SpectralResult r = graph_laplace::secular_spectrum_0(star, -1.0, hi, 1e-12, lids);
      if (r.count_below(hi) >= count || hi > 1e8) {
        r.method = "cone_star_secular";
        r.eigenvalues.resize(
            std::min<std::size_t>(r.eigenvalues.size(), static_cast<std::size_t>(count)));
        int total = 0;
        std::size_t keep = 0;
        while (keep < r.eigenvalues.size() && total < count)
          total += r.eigenvalues[keep++].multiplicity;
        r.eigenvalues.resize(keep);
        return r;
      }
      hi *= 2.0;
    }
  }

  // base eigenvalue branches (mu_j, mult), then Bessel roots per branch
  std::vector<std::pair<double, int>> branches;
  double cutoff = std::pow((count + 2) * M_PI / (2.0 * eps), 2);
  for (;;) {
    branches.clear();
    if (const auto* g = std::get_if<MetricGraph>(&base)) {
      // branches with mu > cutoff * eps^2 start above the cutoff, since the
      // first positive root of J_nu' exceeds nu
      SpectralResult bs =
          graph_laplace::secular_spectrum_0(*g, -1.0, cutoff * eps * eps + 1.0, 1e-12);
      for (const auto& e : bs.eigenvalues) branches.emplace_back(e.lambda, e.multiplicity);
    } else {
      const auto& sp = std::get<std::vector<double>>(base);
      for (double mu : sp) branches.emplace_back(mu, 1);
    }

    std::vector<std::pair<double, int>> merged;  // (lambda, mult)
    for (const auto& [mu, mult] : branches) {
      const double nu = std::sqrt(std::max(mu, 0.0));
      if (nu * nu / (eps * eps) > cutoff) continue;
      if (mu <= 1e-12) merged.emplace_back(0.0, mult);
      std::vector<double> roots = bessel_j_prime_roots(nu, count);
      for (double x : roots) {
        const double lam = (x / eps) * (x / eps);
        if (lam <= cutoff) merged.emplace_back(lam, mult);
      }
    }
    std::sort(merged.begin(), merged.end());

    int total = 0;
    for (const auto& [lam, mult] : merged) total += mult;
    if (total >= count || cutoff > 1e8) {
      SpectralResult res;
      res.degree = 0;
      res.method = "cone_separation";
      res.tolerance = 1e-10;
      {
        std::ostringstream d;
        d << "eps=" << eps << " branches=" << branches.size();
        res.discretization = d.str();
      }
      int k = 1;
      for (const auto& [lam, mult] : merged) {
        if (k > count) break;
        if (!res.eigenvalues.empty() &&
            std::abs(lam - res.eigenvalues.back().lambda) < 1e-9 * std::max(1.0, lam)) {
          res.eigenvalues.back().multiplicity += mult;  // cross-branch collision
          k += mult;
          continue;
        }
        res.eigenvalues.push_back({k, lam, mult, 0.0});
        k += mult;
      }
      return res;
    }
    cutoff *= 2.0;
  }
}

}  // namespace cone
}  // namespace stratspec

#include "stratspec/minmax.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "stratspec/mesh_gen.hpp"

namespace stratspec {
namespace minmax {

namespace {

double bump(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return u * u * u;
}

double bump_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 3.0 * u * u * (1.0 - 2.0 * t);
}

struct Quad1d {
  double b2 = 0.0, db2 = 0.0;
  explicit Quad1d(int g) {
    for (int i = 0; i < g; ++i) {
      const double t = (i + 0.5) / g;
      b2 += bump(t) * bump(t) / g;
      db2 += bump_prime(t) * bump_prime(t) / g;
    }
  }
};

// solve (d M^{-1} d^T) a = rhs by conjugate gradients; the matrix is
// positive semidefinite and the right-hand sides we use lie in its range
Eigen::VectorXd cg_range_solve(const Eigen::SparseMatrix<double>& d,
                               const Eigen::SparseMatrix<double>& dT,
                               const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& Mldlt,
                               const Eigen::VectorXd& rhs) {
  auto apply = [&](const Eigen::VectorXd& a) -> Eigen::VectorXd {
    return d * Mldlt.solve(dT * a);
  };
  Eigen::VectorXd a = Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd r = rhs, p = rhs;
  double rr = r.squaredNorm();
  const double target = 1e-20 * std::max(rr, 1e-300);
  for (int it = 0; it < 10000 && rr > target; ++it) {
    const Eigen::VectorXd Bp = apply(p);
    const double alpha = rr / p.dot(Bp);
    a += alpha * p;
    r -= alpha * Bp;
    const double rr2 = r.squaredNorm();
    p = r + (rr2 / rr) * p;
    rr = rr2;
  }
  return a;
}

// integral of the p-form f dx_1..dx_p over a p-simplex of a flat torus mesh:
// centroid value times the signed volume of the projection onto the first p
// coordinate axes.  Coordinates are unwrapped across the periodic seam.
Eigen::VectorXd form_cochain(const StratifiedComplex& K, int p,
                             const std::function<double(const std::vector<double>&)>& f) {
  const int np = K.count(p);
  Eigen::VectorXd out(np);
  const int nc = static_cast<int>(K.coords[0].size());
  double pfact = 1.0;
  for (int i = 2; i <= p; ++i) pfact *= i;
  for (int s = 0; s < np; ++s) {
    const auto& verts = K.simp[p][s];
    std::vector<std::vector<double>> x(p + 1, std::vector<double>(nc));
    x[0] = K.coords[verts[0]];
    for (int i = 1; i <= p; ++i) {
      for (int c = 0; c < nc; ++c) {
        double dxc = K.coords[verts[i]][c] - x[0][c];
        if (dxc > 0.5) dxc -= 1.0;
        if (dxc < -0.5) dxc += 1.0;
        x[i][c] = x[0][c] + dxc;
      }
    }
    std::vector<double> centroid(nc, 0.0);
    for (int i = 0; i <= p; ++i)
      for (int c = 0; c < nc; ++c) centroid[c] += x[i][c] / (p + 1.0);
    double vol = 1.0;
    if (p > 0) {
      Eigen::MatrixXd proj(p, p);
      for (int i = 1; i <= p; ++i)
        for (int c = 0; c < p; ++c) proj(i - 1, c) = x[i][c] - x[0][c];
      vol = proj.determinant() / pfact;
    }
    out[s] = f(centroid) * vol;
  }
  return out;
}

double quotient_sq_on_mesh(const StratifiedComplex& K, int p, int n, double scale) {
  auto C = mesh_hodge::build_complex(K);
  auto f = [&](const std::vector<double>& x) {
    double v = scale;
    for (int c = 0; c < n; ++c) v *= bump(x[c]);
    return v;
  };
  Eigen::VectorXd psi = form_cochain(K, p, f);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> Mldlt(C.M[p]);
  if (Mldlt.info() != Eigen::Success)
    throw std::runtime_error("bump_profile: mass factorization failed");
  const Eigen::SparseMatrix<double> dT = C.d[p].transpose();
  const Eigen::VectorXd rhs = C.d[p] * psi;
  const Eigen::VectorXd a = cg_range_solve(C.d[p], dT, Mldlt, rhs);
  const double nsq = a.dot(rhs);
  const double full = psi.dot(C.M[p] * psi);
  return nsq / full;
}

// the projection onto the complement of Ker(d) depends only on (n, p): the
// quadrature normalization cancels in the ratio, so the value is cached
std::map<std::pair<int, int>, double>& quotient_values() {
  static std::map<std::pair<int, int>, double> cache;
  return cache;
}
std::mutex& quotient_mutex() {
  static std::mutex m;
  return m;
}
bool quotient_cache(int n, int p, double* out) {
  std::lock_guard<std::mutex> lock(quotient_mutex());
  auto it = quotient_values().find({n, p});
  if (it == quotient_values().end()) return false;
  *out = it->second;
  return true;
}
void quotient_cache_store(int n, int p, double value) {
  std::lock_guard<std::mutex> lock(quotient_mutex());
  quotient_values()[{n, p}] = value;
}

StratifiedComplex reference_torus(int n, int m) {
  if (n == 2) return mesh_gen::torus_grid_2d(m);
  if (n == 3) return mesh_gen::torus_grid_3d(m);
  throw std::invalid_argument("bump_profile: quotient norm reference mesh needs n in {2, 3}");
}

}  // namespace

BumpProfile bump_profile(int n, int p, int grid) {
  if (n < 1 || p < 0 || p >= n)
    throw std::invalid_argument("bump_profile: need 0 <= p < n (d psi vanishes for p = n)");
  if (grid < 8) throw std::invalid_argument("bump_profile: grid too coarse");
  BumpProfile out;
  out.n = n;
  out.p = p;
  out.grid = grid;
  const Quad1d q(grid);
  out.scale = std::pow(q.b2, -0.5 * n);
  out.l2_sq = 1.0;
  out.energy = (n - p) * q.db2 / q.b2;
  if (out.energy <= 0.0) throw std::logic_error("bump_profile: d psi vanished");
  if (p == 0) {
    // relative (Dirichlet) conditions: Ker(d_0) is trivial
    out.quotient_sq = 1.0;
  } else if (double cached = 0.0; quotient_cache(n, p, &cached)) {
    out.quotient_sq = cached;
  } else {
    int m = (n == 2) ? 16 : 4;
    double prev = quotient_sq_on_mesh(reference_torus(n, m), p, n, out.scale);
    for (int round = 0; round < 2; ++round) {
      m *= 2;
      const double next = quotient_sq_on_mesh(reference_torus(n, m), p, n, out.scale);
      if (std::abs(next - prev) < 0.02 * std::abs(next)) {
        // the discrete value approaches the continuum one from below here, so
        // keeping the smaller of the two only enlarges the resulting bound
        out.quotient_sq = std::min(prev, next);
        break;
      }
      prev = next;
      if (round == 1)
        throw std::runtime_error("bump_profile: quotient norm did not stabilize under refinement");
    }
    quotient_cache_store(n, p, out.quotient_sq);
  }
  if (!(out.quotient_sq > 0.0 && out.quotient_sq <= 1.0 + 1e-6))
    throw std::logic_error("bump_profile: quotient square norm outside (0, 1]");
  return out;
}

BoxFamily box_family(const BumpProfile& psi, int c) {
  if (c < 0) throw std::invalid_argument("box_family: c >= 0");
  BoxFamily fam;
  fam.c = c;
  fam.count = 1;
  for (int i = 0; i < psi.n; ++i) fam.count *= (1LL << c);

  // quadrature over one rescaled box in the pullback parameter: the sampled
  // bump values are identical to the level-0 ones, and every metric or
  // Jacobian factor is an exact power of two
  const Quad1d q(psi.grid);
  const double s2 = psi.scale * psi.scale;
  const double jac = std::ldexp(1.0, -c * psi.n);               // box volume factor
  const double comp = std::ldexp(1.0, 2 * c * psi.p);           // |dx_{1..p}|^2 pullback
  const double dcomp = std::ldexp(1.0, 2 * c * (psi.p + 1));    // after one more d
  double b2n = 1.0, b2n1 = 1.0;
  for (int i = 0; i < psi.n; ++i) b2n *= q.b2;
  for (int i = 0; i < psi.n - 1; ++i) b2n1 *= q.b2;
  fam.l2_sq = s2 * b2n * comp * jac;
  fam.energy = s2 * (psi.n - psi.p) * q.db2 * b2n1 * dcomp * jac;
  fam.quotient_sq = psi.quotient_sq * comp * jac;
  return fam;
}

RayleighCertificate certificate(double Lambda, int n, int p, int k, const BumpProfile& psi) {
  if (Lambda < 1.0) throw std::invalid_argument("certificate: Lambda >= 1");
  if (k < 1) throw std::invalid_argument("certificate: k >= 1");
  if (psi.n != n || psi.p != p) throw std::invalid_argument("certificate: profile mismatch");
  RayleighCertificate cert;
  cert.k = k;
  cert.p = p;
  cert.Lambda = Lambda;
  cert.energy = psi.energy;
  cert.quotient_sq = psi.quotient_sq;
  int c = 0;
  while ((1LL << (n * c)) < k) ++c;
  cert.c = c;
  const double kbar = static_cast<double>(1LL << (n * c));
  cert.bound = 4.0 * std::pow(Lambda, 4 * p + 2 * n + 2) * psi.energy / psi.quotient_sq *
               std::pow(kbar, 2.0 / n);
  std::ostringstream prov;
  prov << "box family: n=" << n << " p=" << p << " k=" << k << " kbar=" << kbar
       << " Lambda=" << Lambda << " grid=" << psi.grid;
  cert.provenance = prov.str();
  return cert;
}

std::vector<Eigen::VectorXd> box_cochains(const BumpProfile& psi, int c,
                                          const StratifiedComplex& torus, int p) {
  if (p != psi.p) throw std::invalid_argument("box_cochains: degree mismatch");
  const long long per_axis = 1LL << c;
  std::vector<Eigen::VectorXd> out;
  const double comp = std::ldexp(1.0, c * psi.p);  // pullback factor on the components
  std::vector<long long> box(psi.n, 0);
  for (;;) {
    auto f = [&](const std::vector<double>& x) {
      double v = psi.scale * comp;
      for (int d = 0; d < psi.n; ++d) v *= bump(std::ldexp(x[d], c) - box[d]);
      return v;
    };
    out.push_back(form_cochain(torus, p, f));
    int d = 0;
    while (d < psi.n && ++box[d] == per_axis) box[d++] = 0;
    if (d == psi.n) break;
  }
  return out;
}

double empirical_rayleigh(const std::vector<Eigen::VectorXd>& forms,
                          const mesh_hodge::CochainSystem& C, int p) {
  if (forms.empty()) throw std::invalid_argument("empirical_rayleigh: empty subspace");
  if (p < 0 || p >= C.dim) throw std::invalid_argument("empirical_rayleigh: bad degree");
  const int k = static_cast<int>(forms.size());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> Mldlt(C.M[p]);
  if (Mldlt.info() != Eigen::Success)
    throw std::runtime_error("empirical_rayleigh: mass factorization failed");
  const Eigen::SparseMatrix<double> dT = C.d[p].transpose();

  std::vector<Eigen::VectorXd> dpsi(k), a(k);
  for (int i = 0; i < k; ++i) {
    if (forms[i].size() != C.n(p))
      throw std::invalid_argument("empirical_rayleigh: cochain size mismatch");
    dpsi[i] = C.d[p] * forms[i];
    a[i] = cg_range_solve(C.d[p], dT, Mldlt, dpsi[i]);
  }
  Eigen::MatrixXd W(k, k), G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      W(i, j) = dpsi[i].dot(C.M[p + 1] * dpsi[j]);
      G(i, j) = a[i].dot(dpsi[j]);
    }
  W = 0.5 * (W + W.transpose());
  G = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(G);
  if (gs.eigenvalues()[0] < 1e-10 * std::max(gs.eigenvalues()[k - 1], 1e-300))
    throw std::runtime_error(
        "empirical_rayleigh: subspace collapses after projection off Ker(d)");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(W, G);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("empirical_rayleigh: pencil solve failed");
  return es.eigenvalues()[k - 1];
}

std::pair<double, double> bilipschitz_envelope(double C, int n, int p, double lambda) {
  if (C < 1.0) throw std::invalid_argument("bilipschitz_envelope: C >= 1");
  if (lambda < 0.0) throw std::invalid_argument("bilipschitz_envelope: lambda >= 0");
  const double f = std::pow(C, 2 * n + 4 * p + 2);
  return {lambda / f, lambda * f};
}

std::pair<double, double> weyl_fit(const SpectralResult& result, int k_lo, int k_hi) {
  if (k_hi - k_lo < 10) throw std::invalid_argument("weyl_fit: range length >= 10");
  const auto lam = result.flattened();
  if (k_lo < 1 || k_hi > static_cast<int>(lam.size()))
    throw std::invalid_argument("weyl_fit: k range out of bounds");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = k_hi - k_lo + 1;
  for (int k = k_lo; k <= k_hi; ++k) {
    if (lam[k - 1] <= 0.0) throw std::invalid_argument("weyl_fit: nonpositive eigenvalue");
    const double x = std::log(static_cast<double>(k)), y = std::log(lam[k - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept)};
}

}  // namespace minmax
}  // namespace stratspec

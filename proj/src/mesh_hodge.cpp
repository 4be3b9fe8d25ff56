#include "stratspec/mesh_hodge.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace stratspec {
namespace mesh_hodge {

namespace {

constexpr int kDenseThreshold = 2000;

void combinations(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> c(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      out.push_back(c);
      return;
    }
    for (int v = start; v < n; ++v) {
      c[depth] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);
}

double small_det(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.determinant();
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

CochainSystem build_complex(const StratifiedComplex& K) {
  K.validate();
  const int n = K.dim;
  if (n < 1) throw std::invalid_argument("build_complex: need dim >= 1");

  CochainSystem C;
  C.dim = n;
  C.active.resize(n + 1);
  for (int p = 0; p <= n; ++p) {
    C.active[p].resize(K.count(p));
    for (int i = 0; i < K.count(p); ++i) C.active[p][i] = i;
  }

  // coboundary matrices: integer incidence with alternating signs
  C.d.resize(n);
  for (int p = 0; p < n; ++p) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int t = 0; t < K.count(p + 1); ++t) {
      const auto& s = K.simp[p + 1][t];
      for (int k = 0; k <= p + 1; ++k) {
        std::vector<int> f;
        for (int j = 0; j <= p + 1; ++j)
          if (j != k) f.push_back(s[j]);
        trip.emplace_back(t, K.index_of(p, f), (k % 2) ? -1.0 : 1.0);
      }
    }
    C.d[p].resize(K.count(p + 1), K.count(p));
    C.d[p].setFromTriplets(trip.begin(), trip.end());
  }

  // Whitney mass matrices, assembled per top simplex from edge lengths
  std::vector<std::vector<Eigen::Triplet<double>>> mass(n + 1);
  std::vector<std::vector<std::vector<int>>> faces_by_p(n + 1);
  for (int p = 0; p <= n; ++p) combinations(n + 1, p + 1, faces_by_p[p]);

  for (int top = 0; top < K.count(n); ++top) {
    const auto& g = K.simp[n][top];
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) l(i, j) = l(j, i) = K.edge_length(g[i], g[j]);

    Eigen::MatrixXd E(n, n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        E(i - 1, j - 1) = 0.5 * (l(0, i) * l(0, i) + l(0, j) * l(0, j) - l(i, j) * l(i, j));
    Eigen::LLT<Eigen::MatrixXd> llt(E);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("build_complex: degenerate simplex metric");
    const double detE = llt.matrixL().toDenseMatrix().diagonal().array().square().prod();
    const double vol = std::sqrt(detE) / factorial(n);
    if (!(vol > 0.0)) throw std::invalid_argument("build_complex: zero-volume simplex");

    // Gram matrix of barycentric gradients; grad(lambda_0) = -sum of the rest
    Eigen::MatrixXd Ginv = E.inverse();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 1, n + 1);
    G.block(1, 1, n, n) = Ginv;
    for (int j = 1; j <= n; ++j) {
      G(0, j) = -Ginv.col(j - 1).sum();
      G(j, 0) = G(0, j);
    }
    G(0, 0) = Ginv.sum();

    const double lam2 = vol / ((n + 1.0) * (n + 2.0));  // int lambda_a lambda_b, a != b
    auto ilam = [&](int a, int b) { return lam2 * (a == b ? 2.0 : 1.0); };

    for (int p = 0; p <= n; ++p) {
      const auto& faces = faces_by_p[p];
      const double pf = factorial(p);
      for (const auto& F : faces) {
        std::vector<int> gF;
        for (int v : F) gF.push_back(g[v]);
        const int fi = K.index_of(p, gF);
        for (const auto& H : faces) {
          std::vector<int> gH;
          for (int v : H) gH.push_back(g[v]);
          const int hi = K.index_of(p, gH);
          double val = 0.0;
          Eigen::MatrixXd sub(p, p);
          for (int k = 0; k <= p; ++k)
            for (int m = 0; m <= p; ++m) {
              int r = 0;
              for (int a = 0; a <= p; ++a) {
                if (a == k) continue;
                int cidx = 0;
                for (int b = 0; b <= p; ++b) {
                  if (b == m) continue;
                  sub(r, cidx++) = G(F[a], H[b]);
                }
                ++r;
              }
              const double sgn = ((k + m) % 2) ? -1.0 : 1.0;
              val += sgn * ilam(F[k], H[m]) * small_det(sub);
            }
          mass[p].emplace_back(fi, hi, pf * pf * val);
        }
      }
    }
  }

  C.M.resize(n + 1);
  for (int p = 0; p <= n; ++p) {
    C.M[p].resize(K.count(p), K.count(p));
    C.M[p].setFromTriplets(mass[p].begin(), mass[p].end());
    for (int i = 0; i < K.count(p); ++i)
      if (!(C.M[p].coeff(i, i) > 0.0))
        throw std::invalid_argument(
            "build_complex: simplex not contained in any top-dimensional cell (degree " +
            std::to_string(p) + ", index " + std::to_string(i) + ")");
  }
  return C;
}

CochainSystem apply_relative_bc(const CochainSystem& C, const StratifiedComplex& K) {
  CochainSystem R;
  R.dim = C.dim;
  R.active.resize(C.dim + 1);
  std::vector<Eigen::SparseMatrix<double>> sel(C.dim + 1);
  for (int p = 0; p <= C.dim; ++p) {
    std::vector<int> keep;
    for (int slot = 0; slot < C.n(p); ++slot)
      if (!K.in_boundary(p, C.active[p][slot])) keep.push_back(slot);
    R.active[p].resize(keep.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t r = 0; r < keep.size(); ++r) {
      R.active[p][r] = C.active[p][keep[r]];
      trip.emplace_back(static_cast<int>(r), keep[r], 1.0);
    }
    sel[p].resize(static_cast<int>(keep.size()), C.n(p));
    sel[p].setFromTriplets(trip.begin(), trip.end());
  }
  R.d.resize(C.dim);
  for (int p = 0; p < C.dim; ++p) R.d[p] = sel[p + 1] * C.d[p] * sel[p].transpose();
  R.M.resize(C.dim + 1);
  for (int p = 0; p <= C.dim; ++p) R.M[p] = sel[p] * C.M[p] * sel[p].transpose();
  return R;
}

namespace {

std::pair<Eigen::VectorXd, Eigen::MatrixXd> dense_pencil(const Eigen::MatrixXd& A,
                                                         const Eigen::MatrixXd& M, int count) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("solve_pencil: dense solver failed (is M positive definite?)");
  const int k = std::min<int>(count, static_cast<int>(A.rows()));
  return {es.eigenvalues().head(k), es.eigenvectors().leftCols(k)};
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> lanczos_pencil(const Eigen::SparseMatrix<double>& A,
                                                           const Eigen::SparseMatrix<double>& M,
                                                           int count, double tol,
                                                           std::uint64_t seed) {
  const int N = static_cast<int>(A.rows());
  // shift-invert about a negative shift: A + sigma M is positive definite
  // for PSD A, and the smallest pencil eigenvalues become the largest of
  // (A + sigma M)^{-1} M
  const double sigma = std::max(1e-8, 1e-3 * A.diagonal().sum() / M.diagonal().sum());
  Eigen::SparseMatrix<double> shifted = A + sigma * M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("solve_pencil: factorization of the shifted matrix failed");

  for (int m = std::min(N, std::max(2 * count + 40, 80));; m = std::min(N, 2 * m)) {
    std::mt19937_64 rng(seed + 1);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd V(N, m + 1), MV(N, m + 1);
    Eigen::VectorXd alpha(m), beta(m);
    Eigen::VectorXd v(N);
    for (int i = 0; i < N; ++i) v[i] = gauss(rng);
    Eigen::VectorXd Mv = M * v;
    v /= std::sqrt(v.dot(Mv));
    V.col(0) = v;
    MV.col(0) = M * v;
    int steps = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = ldlt.solve(MV.col(j));
      // full reorthogonalization in the M inner product, twice
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd h = MV.leftCols(j + 1).transpose() * w;
        w -= V.leftCols(j + 1) * h;
        if (pass == 0) alpha[j] = h[j];
      }
      Eigen::VectorXd Mw = M * w;
      beta[j] = std::sqrt(std::max(w.dot(Mw), 0.0));
      if (beta[j] < 1e-13) {
        steps = j + 1;
        break;
      }
      V.col(j + 1) = w / beta[j];
      MV.col(j + 1) = Mw / beta[j];
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    // largest theta correspond to the smallest pencil eigenvalues
    const int k = std::min(count, steps);
    Eigen::VectorXd vals(k);
    Eigen::MatrixXd vecs(N, k);
    for (int i = 0; i < k; ++i) {
      // largest theta = smallest pencil eigenvalue
      const double theta = es.eigenvalues()[steps - 1 - i];
      vals[i] = 1.0 / theta - sigma;
      vecs.col(i) = V.leftCols(steps) * es.eigenvectors().col(steps - 1 - i);
    }
    bool ok = (k == count) || steps == N;
    for (int i = 0; ok && i < k; ++i) {
      Eigen::VectorXd r = A * vecs.col(i) - vals[i] * (M * vecs.col(i));
      const double scale = std::max(1.0, (A * vecs.col(i)).norm());
      if (r.norm() > std::max(tol, 1e-12) * scale) ok = false;
    }
    if (ok || m >= N) {
      if (!ok) throw std::runtime_error("solve_pencil: Lanczos did not converge");
      return {vals, vecs};
    }
  }
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::MatrixXd> solve_pencil(const Eigen::SparseMatrix<double>& A,
                                                         const Eigen::SparseMatrix<double>& M,
                                                         int count, double tol,
                                                         std::uint64_t seed) {
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows())
    throw std::invalid_argument("solve_pencil: size mismatch");
  if (count < 1) throw std::invalid_argument("solve_pencil: count >= 1");
  if (A.rows() <= kDenseThreshold)
    return dense_pencil(Eigen::MatrixXd(A), Eigen::MatrixXd(M), count);
  return lanczos_pencil(A, M, count, tol, seed);
}

SpectralResult quotient_spectrum(const CochainSystem& C, int p, int count, double gap_tol,
                                 std::uint64_t seed) {
  if (p < 0 || p >= C.dim)
    throw std::invalid_argument("quotient_spectrum: degree must be in [0, dim-1]");
  if (count < 1) throw std::invalid_argument("quotient_spectrum: count >= 1");
  const Eigen::SparseMatrix<double> A =
      Eigen::SparseMatrix<double>(C.d[p].transpose()) * C.M[p + 1] * C.d[p];
  const int N = C.n(p);

  std::ostringstream disc;
  disc << "whitney n" << p << "=" << N;

  int req = (N <= kDenseThreshold) ? N : count + 8;
  for (;;) {
    auto [vals, vecs] = solve_pencil(A, C.M[p], req, 1e-9, seed);
    SpectralResult all;
    all.degree = p;
    for (int i = 0; i < vals.size(); ++i)
      all.eigenvalues.push_back({i + 1, std::max(vals[i], 0.0), 1, 0.0});
    const int kdim = kernel_dimension(all, gap_tol);
    const int avail = static_cast<int>(vals.size()) - kdim;
    if (avail < count && req < N) {
      req = std::min(N, 2 * req + 16);
      continue;
    }
    SpectralResult res;
    res.degree = p;
    res.method = (N <= kDenseThreshold) ? "whitney_dense" : "whitney_lanczos";
    res.discretization = disc.str();
    res.tolerance = gap_tol;
    res.seed = seed;
    const int keep = std::min(count, avail);
    for (int i = 0; i < keep; ++i) {
      const int idx = kdim + i;
      Eigen::VectorXd r = A * vecs.col(idx) - vals[idx] * (C.M[p] * vecs.col(idx));
      res.eigenvalues.push_back({i + 1, vals[idx], 1, r.norm()});
    }
    return res;
  }
}

int harmonic_dim(const CochainSystem& C, int p, double gap_tol) {
  if (p < 0 || p > C.dim) throw std::invalid_argument("harmonic_dim: bad degree");
  auto rank_of = [&](const Eigen::SparseMatrix<double>& mat) -> int {
    if (mat.rows() == 0 || mat.cols() == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd((Eigen::MatrixXd(mat)));
    const auto& s = svd.singularValues();
    const double cut = gap_tol * std::max(s[0], 1.0);
    int r = 0;
    while (r < s.size() && s[r] > cut) ++r;
    if (r > 0 && r < s.size() && s[s.size() - 1] > 0 && s[r - 1] / std::max(s[r], 1e-300) < 1e3 &&
        s[r] > 1e-14)
      throw std::runtime_error("harmonic_dim: ambiguous rank (singular values near cutoff)");
    return r;
  };
  const int np = C.n(p);
  const int ker = (p == C.dim) ? np : np - rank_of(C.d[p]);
  const int im = (p == 0) ? 0 : rank_of(C.d[p - 1]);
  return ker - im;
}

SpectralResult hodge_assemble(const SpectralResult& quotient_p,
                              const SpectralResult& quotient_pm1, int harmonic) {
  if (!quotient_pm1.eigenvalues.empty() && quotient_pm1.degree + 1 != quotient_p.degree)
    throw std::invalid_argument("hodge_assemble: degree mismatch");
  if (harmonic < 0) throw std::invalid_argument("hodge_assemble: negative harmonic dimension");
  SpectralResult res;
  res.degree = quotient_p.degree;
  res.method = "hodge[" + quotient_p.method + "]";
  res.discretization = quotient_p.discretization;
  res.tolerance = quotient_p.tolerance;
  res.seed = quotient_p.seed;
  std::vector<std::pair<double, double>> vals;  // (lambda, residual)
  for (const auto& e : quotient_p.eigenvalues)
    for (int c = 0; c < e.multiplicity; ++c) vals.push_back({e.lambda, e.residual});
  for (const auto& e : quotient_pm1.eigenvalues)
    for (int c = 0; c < e.multiplicity; ++c) vals.push_back({e.lambda, e.residual});
  std::sort(vals.begin(), vals.end());
  int k = 1;
  if (harmonic > 0) res.eigenvalues.push_back({k, 0.0, harmonic, 0.0});
  k += harmonic;
  for (const auto& [lam, r] : vals) res.eigenvalues.push_back({k++, lam, 1, r});
  return res;
}

}  // namespace mesh_hodge
}  // namespace stratspec

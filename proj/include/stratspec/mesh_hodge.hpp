#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "stratspec/mesh.hpp"
#include "stratspec/spectral_result.hpp"

namespace stratspec {
namespace mesh_hodge {

/// Discrete de Rham complex of a triangulated space: integer coboundary
/// matrices and Whitney-form mass matrices per degree, assembled from the
/// piecewise-flat simplex metrics.
struct CochainSystem {
  int dim = 0;
  std::vector<Eigen::SparseMatrix<double>> d;  // d[p]: count(p+1) x count(p), p < dim
  std::vector<Eigen::SparseMatrix<double>> M;  // M[p]: count(p) x count(p)
  // active[p][slot] = index of the simplex this slot represents (identity
  // until relative conditions remove boundary slots)
  std::vector<std::vector<int>> active;

  int n(int p) const {
    return (p < 0 || p > dim) ? 0 : static_cast<int>(active[p].size());
  }
};

CochainSystem build_complex(const StratifiedComplex& K);

/// Remove the slots of all simplices in K.boundary (Dirichlet / relative
/// conditions: cochains vanish on the boundary subcomplex).
CochainSystem apply_relative_bc(const CochainSystem& C, const StratifiedComplex& K);

/// Lowest `count` eigenpairs of A x = lambda M x, A symmetric positive
/// semidefinite, M symmetric positive definite.  Dense below a size
/// threshold; above it, shift-invert Lanczos with a seeded start and full
/// reorthogonalization in the M inner product.  Eigenvectors M-normalized.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> solve_pencil(const Eigen::SparseMatrix<double>& A,
                                                         const Eigen::SparseMatrix<double>& M,
                                                         int count, double tol,
                                                         std::uint64_t seed);

/// Positive spectrum of the pencil (d_p^T M_{p+1} d_p, M_p): the Rayleigh
/// quotient |d omega|^2 / |omega|^2 on cochains modulo Ker(d_p).  The zero
/// cluster is removed with a required gap ratio of 10^3; an ambiguous gap
/// throws rather than guesses.
SpectralResult quotient_spectrum(const CochainSystem& C, int p, int count,
                                 double gap_tol = 1e-8, std::uint64_t seed = 0);

/// dim Ker(d_p) - rank(d_{p-1}), both ranks from singular values with a
/// relative cutoff of 1e-8 and a required ratio of 10^3 across the cutoff.
int harmonic_dim(const CochainSystem& C, int p, double gap_tol = 1e-8);

/// Full degree-p Hodge spectrum: zero with multiplicity `harmonic`, then the
/// merge of the degree-p and degree-(p-1) quotient spectra.
SpectralResult hodge_assemble(const SpectralResult& quotient_p,
                              const SpectralResult& quotient_pm1, int harmonic);

}  // namespace mesh_hodge
}  // namespace stratspec

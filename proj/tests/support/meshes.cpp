#include "support/meshes.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "stratspec/mesh_gen.hpp"

namespace testsupport {

using stratspec::MetricGraph;
using stratspec::StratifiedComplex;

std::vector<std::pair<std::string, MetricGraph>> graph_corpus() {
  std::vector<std::pair<std::string, MetricGraph>> out;
  out.push_back({"segment", {{"a", "b"}, {{"e", "a", "b", 1.0}}}});
  out.push_back({"circle", {{"v"}, {{"e", "v", "v", 2.0 * M_PI}}}});
  out.push_back({"figure-eight",
                 {{"v"}, {{"a", "v", "v", 1.0}, {"b", "v", "v", 2.0}}}});
  out.push_back({"three-star",
                 {{"c", "l1", "l2", "l3"},
                  {{"e1", "c", "l1", 1.0}, {"e2", "c", "l2", 1.5}, {"e3", "c", "l3", 0.5}}}});
  out.push_back({"theta",
                 {{"a", "b"},
                  {{"e1", "a", "b", 1.0}, {"e2", "a", "b", 1.3}, {"e3", "a", "b", 2.1}}}});
  out.push_back({"two-components",
                 {{"u", "v"}, {{"loop", "u", "u", 1.0}, {"seg", "v", "v", 3.0}}}});
  out.push_back({"dumbbell",
                 {{"a", "b"},
                  {{"l1", "a", "a", 1.0}, {"bar", "a", "b", 0.7}, {"l2", "b", "b", 2.0}}}});
  out.push_back({"path-tree",
                 {{"a", "b", "c", "d"},
                  {{"e1", "a", "b", 1.0}, {"e2", "b", "c", 0.5}, {"e3", "c", "d", 1.5}}}});
  out.push_back({"spider",
                 {{"c", "x", "y", "z", "w"},
                  {{"e1", "c", "x", 1.0},
                   {"e2", "c", "y", 1.1},
                   {"e3", "c", "z", 0.9},
                   {"e4", "c", "w", 1.3}}}});
  out.push_back({"b1-three",
                 {{"a", "b"},
                  {{"e1", "a", "b", 1.0},
                   {"e2", "a", "b", 1.4},
                   {"e3", "a", "b", 0.8},
                   {"e4", "a", "b", 2.2}}}});
  out.push_back({"lasso",
                 {{"a", "b", "c"},
                  {{"loop", "a", "a", 1.2}, {"e1", "a", "b", 0.6}, {"e2", "b", "c", 0.9}}}});
  for (auto& [name, g] : out) g.validate();
  return out;
}

namespace {

double edge_gram_distortion(const StratifiedComplex& orig, const StratifiedComplex& scaled,
                            const std::vector<int>& tri) {
  auto gram = [&](const StratifiedComplex& K) {
    const double l01 = K.edge_length(tri[0], tri[1]);
    const double l02 = K.edge_length(tri[0], tri[2]);
    const double l12 = K.edge_length(tri[1], tri[2]);
    Eigen::Matrix2d E;
    E(0, 0) = l01 * l01;
    E(1, 1) = l02 * l02;
    E(0, 1) = E(1, 0) = 0.5 * (l01 * l01 + l02 * l02 - l12 * l12);
    return E;
  };
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(gram(scaled), gram(orig));
  const double lo = es.eigenvalues()[0], hi = es.eigenvalues()[1];
  if (lo <= 0.0) throw std::runtime_error("conformal_torus: degenerate triangle metric");
  return std::sqrt(std::max(hi, 1.0 / lo));
}

}  // namespace

StratifiedComplex conformal_torus(int m, double C, double* c_eff) {
  if (C < 1.0) throw std::invalid_argument("conformal_torus: C >= 1");
  StratifiedComplex orig = stratspec::mesh_gen::torus_grid_2d(m);
  StratifiedComplex K = orig;
  const double a = 0.9 * std::log(C);
  for (auto& [key, L] : K.length_override) {
    const auto& pu = orig.coords[key.first];
    const auto& pv = orig.coords[key.second];
    double mx = 0.0, my = 0.0;
    double dx = pv[0] - pu[0], dy = pv[1] - pu[1];
    if (dx > 0.5) dx -= 1.0;
    if (dx < -0.5) dx += 1.0;
    if (dy > 0.5) dy -= 1.0;
    if (dy < -0.5) dy += 1.0;
    mx = pu[0] + 0.5 * dx;
    my = pu[1] + 0.5 * dy;
    const double factor = std::exp(a * std::sin(2.0 * M_PI * mx) * std::sin(2.0 * M_PI * my));
    L *= factor;
  }
  K.validate();
  if (c_eff) {
    double worst = 1.0;
    for (const auto& tri : K.simp[2])
      worst = std::max(worst, edge_gram_distortion(orig, K, tri));
    *c_eff = worst;
  }
  return K;
}

}  // namespace testsupport

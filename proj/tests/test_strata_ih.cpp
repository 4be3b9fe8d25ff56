#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stratspec/cone.hpp"
#include "stratspec/mesh.hpp"
#include "stratspec/mesh_gen.hpp"
#include "stratspec/mesh_hodge.hpp"
#include "stratspec/strata_ih.hpp"

using namespace stratspec;
namespace si = stratspec::strata_ih;
namespace mg = stratspec::mesh_gen;
namespace mh = stratspec::mesh_hodge;

namespace {

MetricGraph figure_eight() {
  return {{"v"}, {{"a", "v", "v", 1.0}, {"b", "v", "v", 2.0}}};
}

StratifiedComplex circle_complex(int m) {
  std::vector<std::vector<double>> coords(m);
  std::vector<std::vector<int>> edges(m);
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * M_PI * i / m;
    coords[i] = {std::cos(t), std::sin(t)};
    int a = i, b = (i + 1) % m;
    edges[i] = {std::min(a, b), std::max(a, b)};
  }
  return make_complex(1, coords, edges);
}

}  // namespace

TEST_CASE("upper-middle perversity values") {
  auto pv = si::gm_perversity(3);
  REQUIRE(pv.values.size() == 4);
  CHECK(pv.values[0] == 0);
  CHECK(pv.values[1] == 0);
  CHECK(pv.values[2] == 0);
  CHECK(pv.values[3] == 1);
  CHECK(si::gm_perversity(7).at(7) == 3);
  CHECK(si::gm_perversity(1).at(1) == 0);

  si::Perversity bad;
  bad.values = {0, 2};
  CHECK_THROWS(bad.validate());
  bad.values = {1};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("stratification heuristics: graphs, closed surfaces, disks") {
  auto G = si::stratify_multiconical(mg::graph_complex({{"c", "l1", "l2", "l3"},
                                                        {{"e1", "c", "l1", 1.0},
                                                         {"e2", "c", "l2", 1.0},
                                                         {"e3", "c", "l3", 1.0}}}));
  // valence-2 subdivision vertices are regular; the center and the three
  // leaves are not
  CHECK(G.strata[0].size() == 4);

  auto T = si::stratify_multiconical(mg::csaszar_torus());
  CHECK(T.strata[0].empty());
  CHECK(T.strata[1].empty());

  auto D = si::stratify_multiconical(mg::disk_mesh(3, 12));
  CHECK(D.strata[0].empty());
  CHECK(D.strata[1].size() == 24);  // 12 boundary vertices + 12 boundary edges

  auto B = si::stratify_multiconical(mg::torus_grid_3d(3));
  for (const auto& level : B.strata) CHECK(level.empty());
}

TEST_CASE("stratification heuristics: solid ball has a boundary stratum") {
  // cone over a sphere is a ball; the link test marks the lid as X_2
  auto ball = mg::cone_over(mg::sphere_mesh(1));
  ball.strata.clear();
  auto S = si::stratify_multiconical(ball);
  int bverts = 0;
  for (const auto& [p, idx] : S.strata[2])
    if (p == 0) ++bverts;
  CHECK(bverts == mg::sphere_mesh(1).count(0));  // every lid vertex
  // the apex link is a sphere, so the apex is an interior point here
  CHECK(S.strata[0].empty());
}

TEST_CASE("allowability on the stratified disk") {
  auto D = barycentric_subdivide(mg::disk_mesh(2, 8, true));
  auto pv = si::gm_perversity(2);
  std::set<int> bverts;
  for (const auto& [p, idx] : D.strata[1])
    if (p == 0) bverts.insert(idx);
  for (int t = 0; t < D.count(2); ++t) CHECK(si::allowable(D, 2, t, pv));
  int banned_edges = 0, banned_verts = 0;
  for (int e = 0; e < D.count(1); ++e)
    if (!si::allowable(D, 1, e, pv)) ++banned_edges;
  for (int v = 0; v < D.count(0); ++v)
    if (!si::allowable(D, 0, v, pv)) ++banned_verts;
  CHECK(banned_verts == static_cast<int>(bverts.size()));  // every boundary vertex
  CHECK(banned_edges > 0);                                 // boundary edges
  CHECK_THROWS(si::allowable(D, 0, D.count(0), pv));
}

TEST_CASE("intersection homology: figure-eight graph") {
  auto K = si::stratify_multiconical(mg::graph_complex(figure_eight()));
  auto ih = si::ih_betti(K, si::gm_perversity(1));
  CHECK(ih.betti.at(0) == 1);
  CHECK(ih.betti.at(1) == 2);
}

TEST_CASE("intersection homology: disk with boundary stratum") {
  auto ih = si::ih_betti(mg::disk_mesh(2, 8, true), si::gm_perversity(2));
  CHECK(ih.betti.at(0) == 1);
  CHECK(ih.betti.at(1) == 0);
  CHECK(ih.betti.at(2) == 0);
}

TEST_CASE("empty singular set reduces to simplicial homology") {
  auto torus = si::ih_betti(mg::csaszar_torus(), si::gm_perversity(2));
  CHECK(torus.betti.at(0) == 1);
  CHECK(torus.betti.at(1) == 2);
  CHECK(torus.betti.at(2) == 1);

  auto sphere = si::ih_betti(mg::sphere_mesh(1), si::gm_perversity(2));
  CHECK(sphere.betti.at(0) == 1);
  CHECK(sphere.betti.at(1) == 0);
  CHECK(sphere.betti.at(2) == 1);
}

TEST_CASE("spindle: two cone points do not change the sphere answer") {
  auto ih = si::ih_betti(mg::spindle_mesh(6), si::gm_perversity(2));
  CHECK(ih.betti.at(0) == 1);
  CHECK(ih.betti.at(1) == 0);
  CHECK(ih.betti.at(2) == 1);
}

TEST_CASE("subdivision invariance") {
  for (const auto& K : {mg::disk_mesh(2, 8, true), mg::spindle_mesh(5)}) {
    auto a = si::ih_betti(K, si::gm_perversity(2));
    auto b = si::ih_betti(barycentric_subdivide(K), si::gm_perversity(2));
    CHECK(a.betti == b.betti);
  }
}

TEST_CASE("enlarging the perversity never shrinks the allowable chain groups") {
  auto S = barycentric_subdivide(mg::spindle_mesh(6));
  auto gm = si::gm_perversity(2);
  si::Perversity top;
  top.values = {0, 1, 2};
  top.validate();
  for (int p = 0; p <= 2; ++p)
    for (int i = 0; i < S.count(p); ++i)
      if (si::allowable(S, p, i, gm)) CHECK(si::allowable(S, p, i, top));
}

TEST_CASE("cone consistency: triangulated cones match the cone formula tables") {
  // cone over two points (k = 1)
  auto two = mg::cone_over(make_complex(0, {{0.0}, {2.0}}, {{0}, {1}}));
  auto ih1 = si::ih_betti(two, si::gm_perversity(1));
  auto t1 = cone::cone_ih({{0, 1}}, 1);
  CHECK(ih1.betti.at(0) == t1.get(t1.ih_c, 0));
  CHECK(ih1.betti.at(1) == t1.get(t1.ih_c, 1));

  // cone over a circle (k = 2)
  auto over_circle = mg::cone_over(circle_complex(8));
  auto ih2 = si::ih_betti(over_circle, si::gm_perversity(2));
  auto t2 = cone::cone_ih({{0, 1}, {1, 1}}, 2);
  for (int j = 0; j <= 2; ++j) CHECK(ih2.betti.at(j) == t2.get(t2.ih_c, j));

  // cone over the smallest torus (k = 3)
  auto over_torus = mg::cone_over(mg::csaszar_torus());
  auto ih3 = si::ih_betti(over_torus, si::gm_perversity(3));
  auto t3 = cone::cone_ih({{0, 1}, {1, 2}, {2, 1}}, 3);
  for (int j = 0; j <= 3; ++j) CHECK(ih3.betti.at(j) == t3.get(t3.ih_c, j));
}

TEST_CASE("hodge cross-check: graphs") {
  auto dims = si::graph_kernel_dims(figure_eight());
  REQUIRE(dims.size() == 2);
  CHECK(dims[0] == 2);
  CHECK(dims[1] == 1);
  auto ih = si::ih_betti(si::stratify_multiconical(mg::graph_complex(figure_eight())),
                         si::gm_perversity(1));
  auto rep = si::hodge_cross_check(dims, ih);
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 2);
  CHECK(rep.table().find("pass") != std::string::npos);
}

TEST_CASE("hodge cross-check: torus, sphere, spindle, disk") {
  auto check_closed = [](const StratifiedComplex& K) {
    auto C = mh::build_complex(K);
    std::vector<int> dims;
    for (int p = 0; p <= K.dim; ++p) dims.push_back(mh::harmonic_dim(C, p));
    auto ih = si::ih_betti(K, si::gm_perversity(K.dim));
    return si::hodge_cross_check(dims, ih);
  };
  CHECK(check_closed(mg::csaszar_torus()).pass);
  CHECK(check_closed(mg::sphere_mesh(1)).pass);
  CHECK(check_closed(mg::spindle_mesh(6)).pass);

  auto D = mg::disk_mesh(3, 9, true);
  auto R = mh::apply_relative_bc(mh::build_complex(D), D);
  std::vector<int> dims;
  for (int p = 0; p <= 2; ++p) dims.push_back(mh::harmonic_dim(R, p));
  auto rep = si::hodge_cross_check(dims, si::ih_betti(D, si::gm_perversity(2)));
  CHECK(rep.pass);
}

TEST_CASE("hodge cross-check flags a mismatch") {
  auto ih = si::ih_betti(mg::csaszar_torus(), si::gm_perversity(2));
  auto rep = si::hodge_cross_check({1, 1, 1}, ih);
  CHECK_FALSE(rep.pass);
  CHECK(rep.table().find("FAIL") != std::string::npos);
}

TEST_CASE("input validation") {
  si::Perversity shorty;
  shorty.values = {0};
  CHECK_THROWS(si::ih_betti(mg::csaszar_torus(), shorty));
  CHECK_THROWS(si::gm_perversity(-1));
  CHECK_THROWS(si::hodge_cross_check({}, si::ih_betti(mg::sphere_mesh(1), si::gm_perversity(2))));
}

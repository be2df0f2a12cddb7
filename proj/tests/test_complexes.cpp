#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "gpach/complexes.hpp"

using namespace gpach;

namespace {

bool same_simplices(const Triangulation& a, const Triangulation& b) {
  return a.canonicalized().simplices == b.canonicalized().simplices;
}

Pentachoron pent(int a, int b, int c, int d, int e, int sign) {
  return Pentachoron{{a, b, c, d, e}, sign};
}

void check_closed_sphere_shape(const Triangulation& t) {
  validate(t);
  FaceClassification fc = classify(t);
  CHECK(fc.boundary_tets.empty());
  CHECK(fc.euler_characteristic() == 2);
}

}  // namespace

TEST_SUITE("complexes") {

TEST_CASE("six-simplex sphere invariants") {
  Triangulation t = delta5_boundary();
  validate(t);
  FaceClassification fc = classify(t);
  CHECK(t.simplices.size() == 6);
  CHECK(fc.vertices_used.size() == 6);
  CHECK(fc.edges.size() == 15);
  CHECK(fc.inner_edges.size() == 15);  // closed: every edge is inner
  CHECK(fc.faces2.size() == 20);
  CHECK(fc.tets.size() == 15);
  CHECK(fc.boundary_tets.empty());
  CHECK(fc.inner_tets.size() == 15);
  for (const auto& [tet, inc] : fc.tet_incidence) {
    (void)tet;
    CHECK(inc.size() == 2);
  }
  CHECK(fc.euler_characteristic() == 2);
}

TEST_CASE("orientation signs") {
  CHECK(permutation_parity({1, 2, 3}) == 1);
  CHECK(permutation_parity({2, 1, 3}) == -1);
  CHECK(permutation_parity({3, 1, 2}) == 1);

  Pentachoron u{{1, 2, 3, 4, 5}, 1};
  CHECK(epsilon_sign(u, {1, 2, 3, 4, 5}) == 1);
  CHECK(epsilon_sign(u, {4, 1, 2, 3, 5}) == -1);
  CHECK(epsilon_sign(u, {2, 1, 3, 4, 5}) == -1);
  Pentachoron v{{1, 2, 3, 4, 5}, -1};
  CHECK(epsilon_sign(v, {1, 2, 3, 4, 5}) == -1);
  CHECK_THROWS_AS(epsilon_sign(u, {1, 1, 2, 3, 4}), std::invalid_argument);
}

TEST_CASE("builtin moves carry the canonical orientations") {
  MoveInstance m33 = builtin_move(BuiltinMove::ThreeThree);
  REQUIRE(m33.lhs.simplices.size() == 3);
  REQUIRE(m33.rhs.simplices.size() == 3);
  CHECK(m33.lhs.simplices[0] == pent(1, 2, 3, 4, 5, 1));
  CHECK(m33.lhs.simplices[1] == pent(1, 2, 3, 4, 6, -1));
  CHECK(m33.lhs.simplices[2] == pent(1, 2, 3, 5, 6, 1));
  CHECK(m33.rhs.simplices[0] == pent(1, 2, 4, 5, 6, 1));
  CHECK(m33.rhs.simplices[1] == pent(1, 3, 4, 5, 6, -1));
  CHECK(m33.rhs.simplices[2] == pent(2, 3, 4, 5, 6, 1));

  // the two sides close up along the same nine boundary tetrahedra
  CHECK(classify(m33.lhs).boundary_tets.size() == 9);
  CHECK(classify(m33.lhs).boundary_tets == classify(m33.rhs).boundary_tets);
  CHECK(m33.boundary_tets.size() == 9);
  check_closed_sphere_shape(m33.glued);
  CHECK(same_simplices(m33.glued, delta5_boundary()));

  MoveInstance m24 = builtin_move(BuiltinMove::TwoFour);
  REQUIRE(m24.lhs.simplices.size() == 2);
  REQUIRE(m24.rhs.simplices.size() == 4);
  CHECK(m24.rhs.simplices[0] == pent(1, 2, 3, 5, 6, -1));
  CHECK(m24.rhs.simplices[1] == pent(1, 2, 4, 5, 6, 1));
  CHECK(m24.rhs.simplices[2] == pent(1, 3, 4, 5, 6, -1));
  CHECK(m24.rhs.simplices[3] == pent(2, 3, 4, 5, 6, 1));
  CHECK(classify(m24.lhs).boundary_tets == classify(m24.rhs).boundary_tets);
  CHECK(classify(m24.lhs).boundary_tets.size() == 8);
  check_closed_sphere_shape(m24.glued);
}

TEST_CASE("bistellar moves compose and invert") {
  Triangulation t0 = delta5_boundary();
  // the complete six-vertex complex admits no move that would create an
  // already-present face, so only the subdivision is available
  CHECK(enumerate_locations(t0, MoveKind::M33).empty());
  CHECK(enumerate_locations(t0, MoveKind::M24).empty());
  CHECK(enumerate_locations(t0, MoveKind::M42).empty());
  CHECK(enumerate_locations(t0, MoveKind::M51).empty());
  CHECK(enumerate_locations(t0, MoveKind::M15).size() == 6);

  Triangulation t1 = apply_bistellar(t0, MoveKind::M15, {1, 2, 3, 4, 5});
  CHECK(t1.n_vertices == 7);
  CHECK(t1.simplices.size() == 10);
  check_closed_sphere_shape(t1);

  Triangulation t2 = apply_bistellar(t1, MoveKind::M24, {1, 2, 3, 4});
  CHECK(t2.simplices.size() == 12);
  check_closed_sphere_shape(t2);

  auto locs33 = enumerate_locations(t2, MoveKind::M33);
  CHECK(std::find(locs33.begin(), locs33.end(), std::vector<int>{1, 2, 3}) != locs33.end());
  Triangulation t3 = apply_bistellar(t2, MoveKind::M33, {1, 2, 3});
  CHECK(t3.simplices.size() == 12);
  check_closed_sphere_shape(t3);
  CHECK(same_simplices(apply_bistellar(t3, MoveKind::M33, {5, 6, 7}), t2));

  CHECK(same_simplices(apply_bistellar(t2, MoveKind::M42, {6, 7}), t1));
  CHECK(same_simplices(apply_bistellar(t1, MoveKind::M51, {7}), t0));

  CHECK_THROWS_AS(apply_bistellar(t0, MoveKind::M24, {1, 2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(apply_bistellar(t0, MoveKind::M33, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(apply_bistellar(t1, MoveKind::M51, {1}), std::invalid_argument);
}

TEST_CASE("random walks stay on valid closed complexes") {
  Triangulation t = delta5_boundary();
  std::vector<MoveKind> kinds = {MoveKind::M33, MoveKind::M24, MoveKind::M42, MoveKind::M15};
  RandomSource rng_a(5), rng_b(5);
  Triangulation wa = random_walk(t, 8, kinds, rng_a);
  Triangulation wb = random_walk(t, 8, kinds, rng_b);
  CHECK(same_simplices(wa, wb));
  check_closed_sphere_shape(wa);

  RandomSource rng_c(6);
  Triangulation wc = random_walk(t, 8, kinds, rng_c);
  check_closed_sphere_shape(wc);
}

TEST_CASE("relabeling round-trips") {
  Triangulation t = delta5_boundary();
  std::vector<int> perm = {2, 3, 4, 5, 6, 1};
  std::vector<int> inv = {6, 1, 2, 3, 4, 5};
  Triangulation r = relabel(t, perm);
  validate(r);
  CHECK(classify(r).euler_characteristic() == 2);
  CHECK(same_simplices(relabel(r, inv), t));
  CHECK_THROWS_AS(relabel(t, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("file round-trip") {
  Triangulation bundled = read_triangulation_file(std::string(GPACH_DATA_DIR) + "/boundary_delta5.tri");
  CHECK(bundled.n_vertices == 6);
  CHECK(same_simplices(bundled, delta5_boundary()));

  Triangulation t = delta5_boundary();
  t.coords = {{ExactScalar(0)}, {ExactScalar(1)}, {ExactScalar(2)},
              {ExactScalar(3)}, {ExactScalar(mpq_class(1, 2))}, {ExactScalar(mpq_class(1, 3))}};
  validate(t);
  std::stringstream ss;
  write_triangulation(t, ss);
  Triangulation back = read_triangulation(ss);
  CHECK(back.n_vertices == t.n_vertices);
  CHECK(same_simplices(back, t));
  REQUIRE(back.coords.size() == 6);
  for (int v = 0; v < 6; ++v) CHECK(back.coords[std::size_t(v)] == t.coords[std::size_t(v)]);
}

TEST_CASE("malformed files are rejected") {
  auto expect_reject = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_triangulation(in), std::invalid_argument);
  };
  expect_reject("dim 3\nvertices 6\n");
  expect_reject("vertices 6\nsimplex 1 2 3 4 5 +1\n");  // missing dim
  expect_reject("dim 4\nsimplex 1 2 3 4 5 +1\n");       // missing vertex count
  expect_reject("dim 4\nvertices 6\nsimplex 1 2 3 4 5 2\n");
  expect_reject("dim 4\nvertices 6\nsimplex 1 2 3 4 +1\n");
  expect_reject("dim 4\nvertices 6\nsimplex 2 1 3 4 5 +1\n");
  expect_reject("dim 4\nvertices 6\nsimplex 1 2 3 4 7 +1\n");
  expect_reject("dim 4\nvertices 6\ncoord 1 1/2 3\nsimplex 1 2 3 4 5 +1\n");
  expect_reject("dim 4\nvertices 6\ncoord 1 1\ncoord 1 2\nsimplex 1 2 3 4 5 +1\n");
  expect_reject("dim 4\nvertices 6\ncoord 1 1\nsimplex 1 2 3 4 5 +1\n");  // coords must cover all
  expect_reject("dim 4\nvertices 6\nwidget 3\n");
  CHECK_THROWS_AS(read_triangulation_file("/nonexistent/path.tri"), std::invalid_argument);
}

TEST_CASE("structural validation") {
  Triangulation t;
  t.n_vertices = 7;
  t.simplices = {{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 6}, -1}, {{1, 2, 3, 4, 7}, 1}};
  CHECK_THROWS_AS(validate(t), std::invalid_argument);  // facet 1234 in three pentachora

  Triangulation s;
  s.n_vertices = 6;
  s.simplices = {{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 6}, 1}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);  // same induced orientation on 1234

  Triangulation d;
  d.n_vertices = 6;
  d.simplices = {{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 5}, -1}};
  CHECK_THROWS_AS(validate(d), std::invalid_argument);  // duplicate pentachoron

  CHECK(tet_label(Tet{1, 2, 3, 4}) == "1234");
  CHECK(tet_label(Tet{2, 3, 7, 12}) == "2-3-7-12");
}

}  // TEST_SUITE

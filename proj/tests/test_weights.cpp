#include <bit>

#include "doctest.h"
#include "gpach/weights.hpp"

using namespace gpach;
using E = ExactScalar;
using GE = GrassmannElement<E>;

namespace {

E q(long num, long den) { return E(mpq_class(num, den)); }

// the worked six-vertex parameter point used throughout this suite
std::vector<E> fixed_xi() { return {E(0), E(1), E(2), E(3), q(1, 2), q(1, 3)}; }

// one 3-vector per vertex on the moment curve; all face factors are Vandermonde-nonzero
std::vector<std::array<E, 3>> moment_params() {
  std::vector<std::array<E, 3>> p;
  for (const E& t : fixed_xi()) p.push_back({E(1), t, t * t});
  return p;
}

// coefficient matrix of a degree-2 element over n generators
Matrix<E> quadratic_matrix(const GE& f, int n) {
  Matrix<E> m(n, n);
  for (const auto& [mask, c] : f.terms()) {
    Mask byte = mask;
    int i = std::countr_zero(byte);
    byte &= byte - 1;
    int j = std::countr_zero(byte);
    m.at(i, j) = c;
    m.at(j, i) = -c;
  }
  return m;
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("face factors") {
  CHECK(face_factor_1(E(0), E(1), E(2)) == q(2, 3));
  CHECK(face_factor_1(E(3), q(1, 2), q(1, 3)) == q(-4, 21));
  // swapping two arguments flips the sign
  CHECK(face_factor_1(E(1), E(0), E(2)) == q(-2, 3));
  CHECK_THROWS_AS(face_factor_1(E(2), q(-1, 2), E(5)), Degenerate);  // 1 + ab = 0
  CHECK_THROWS_AS(face_factor_1(E(1), E(1), E(2)), Degenerate);      // repeated parameter

  std::array<E, 3> e1 = {E(1), E(0), E(0)}, e2 = {E(0), E(1), E(0)}, e3 = {E(0), E(0), E(1)};
  CHECK(face_factor_3(e1, e2, e3) == E(1));
  CHECK(face_factor_3(e2, e1, e3) == E(-1));
  CHECK_THROWS_AS(face_factor_3(e1, e1, e3), Degenerate);
}

TEST_CASE("face factor tables are antisymmetric") {
  auto phi = FaceFactorTable<E>::family1(fixed_xi(), all_faces2(6));
  CHECK(phi.get(1, 2, 3) == q(2, 3));
  CHECK(phi.get(4, 5, 6) == q(-4, 21));
  CHECK(phi.get(2, 1, 3) == q(-2, 3));
  CHECK(phi.get(3, 1, 2) == q(2, 3));
  CHECK(phi.has(Face2{1, 2, 3}));

  FaceFactorTable<E> empty;
  CHECK_THROWS_AS(empty.get(1, 2, 3), std::invalid_argument);

  auto phi2 = FaceFactorTable<E>::family2(moment_params(), all_faces2(6));
  CHECK(phi2.get(2, 1, 3) == -phi2.get(1, 2, 3));
  CHECK(phi2.get(3, 1, 2) == phi2.get(1, 2, 3));
}

TEST_CASE("quadratic forms") {
  TetIndex idx = index_tets(all_tets(6));
  REQUIRE(idx.tets.size() == 15);
  auto phi = FaceFactorTable<E>::family1(fixed_xi(), all_faces2(6));
  Pentachoron u{{1, 2, 3, 4, 5}, 1};

  GE quad = quadratic_form(u, phi, idx);
  CHECK(quad.terms().size() == 10);
  CHECK(degrees(quad) == std::set<int>({2}));
  // the x_{1234} x_{1235} term carries -phi_{123}
  Mask m01 = (Mask(1) << idx.index_of(Tet{1, 2, 3, 4})) | (Mask(1) << idx.index_of(Tet{1, 2, 3, 5}));
  CHECK(quad.coefficient(m01) == q(-2, 3));

  // first family: full rank, non-vanishing square
  CHECK(rank(quadratic_matrix(quad, int(idx.tets.size()))) == 4);
  CHECK(!(quad * quad).is_zero());

  // second family: rank two, square zero
  auto phi2 = FaceFactorTable<E>::family2(moment_params(), all_faces2(6));
  GE quad2 = quadratic_form(u, phi2, idx);
  CHECK(rank(quadratic_matrix(quad2, int(idx.tets.size()))) == 2);
  CHECK((quad2 * quad2).is_zero());
}

TEST_CASE("weight normal forms") {
  TetIndex idx = index_tets(all_tets(6));
  Pentachoron u{{1, 2, 3, 4, 5}, 1};
  auto phi = FaceFactorTable<E>::family1(fixed_xi(), all_faces2(6));
  GE quad = quadratic_form(u, phi, idx);
  GE w1 = weight_family1(u, phi, idx);
  CHECK(w1 == exponential(quad));
  CHECK(w1.coefficient(0) == E(1));
  CHECK(parity(w1) == Parity::Even);

  auto phi2 = FaceFactorTable<E>::family2(moment_params(), all_faces2(6));
  GE quad2 = quadratic_form(u, phi2, idx);
  E h = q(3, 7);
  GE w2 = weight_family2(u, h, phi2, idx);
  CHECK(w2 == GE::scalar(&idx.reg(), h) + quad2);
  // with a nilpotent square, h e^{quad/h} collapses to h + quad
  GE scaled = quad2;
  scaled *= E(1) / h;
  GE he = exponential(scaled);
  he *= h;
  CHECK(he == w2);
}

TEST_CASE("allowable h from an edge chain") {
  auto phi = FaceFactorTable<E>::family1(fixed_xi(), all_faces2(6));
  std::map<Edge, E> chain;
  chain[Edge{1, 2}] = E(1);

  Pentachoron u{{1, 2, 3, 4, 5}, 1};
  CHECK(edge_phi_product(Edge{1, 2}, u, phi) == q(-1, 6));
  CHECK(allowable_h(u, chain, phi) == E(-6));
  CHECK(allowable_h(u, chain, phi) == E(1) / edge_phi_product(Edge{1, 2}, u, phi));

  // pentachora missing the edge pick up nothing
  Pentachoron v{{1, 3, 4, 5, 6}, 1};
  CHECK(allowable_h(v, chain, phi).is_zero());
  Pentachoron w{{2, 3, 4, 5, 6}, 1};
  CHECK(allowable_h(w, chain, phi).is_zero());

  // the per-vertex convenience form
  auto params = moment_params();
  E a = E(2), b = q(-1, 3), c = q(1, 5);
  E expect = a * params[5][0] + b * params[5][1] + c * params[5][2];
  CHECK(h_missing_vertex(u, params, a, b, c) == expect);
}

TEST_CASE("edge operators and edge weights") {
  TetIndex idx = index_tets(all_tets(6));
  auto phi = FaceFactorTable<E>::family1(fixed_xi(), all_faces2(6));

  FirstOrderOperator<E> d56 = edge_operator(Edge{5, 6}, idx, phi);
  CHECK(d56.gamma.empty());
  CHECK(d56.beta.size() == 6);
  for (const Tet& t : {Tet{1, 2, 5, 6}, Tet{1, 3, 5, 6}, Tet{1, 4, 5, 6}, Tet{2, 3, 5, 6}, Tet{2, 4, 5, 6},
                       Tet{3, 4, 5, 6}})
    CHECK(d56.beta.count(idx.index_of(t)) == 1);
  E expect = E(1) / (phi.get(5, 6, 1) * phi.get(5, 6, 2));
  CHECK(d56.beta.at(idx.index_of(Tet{1, 2, 5, 6})) == expect);

  GE w56 = edge_weight(Edge{5, 6}, idx, phi);
  CHECK(w56.terms().size() == 1);
  Mask m = Mask(1) << idx.index_of(Tet{1, 2, 5, 6});
  CHECK(w56.coefficient(m) == phi.get(1, 5, 6) * phi.get(2, 5, 6));
  CHECK(apply(d56, w56) == GE::scalar(&idx.reg(), E(1)));

  TetIndex thin = index_tets({Tet{1, 2, 3, 4}});
  auto phi_small = FaceFactorTable<E>::family1(fixed_xi(), all_faces2(6));
  CHECK_THROWS_AS(edge_weight(Edge{5, 6}, thin, phi_small), std::invalid_argument);

  // second-family weights satisfy every edge equation on every pentachoron
  auto phi2 = FaceFactorTable<E>::family2(moment_params(), all_faces2(6));
  std::map<Edge, E> chain;
  chain[Edge{1, 2}] = E(1);
  chain[Edge{3, 5}] = q(2, 7);
  for (const Pentachoron& u : delta5_boundary().simplices) {
    E h = allowable_h(u, chain, phi2);
    GE w = weight_family2(u, h, phi2, idx);
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b)
        CHECK(apply(edge_operator(Edge{u.v[a], u.v[b]}, idx, phi2), w).is_zero());
  }
}

TEST_CASE("r and s factors") {
  auto xi = fixed_xi();
  CHECK(r_factor(xi, 1, 2, 4, 5) == E(-5));
  CHECK(s_factor(xi, 1, 2, 4, 5) == q(5, 3));

  std::vector<E> rep = {E(0), E(1), E(0), E(3)};
  CHECK_THROWS_AS(r_factor(rep, 1, 2, 3, 4), Degenerate);  // repeated parameter pole
  std::vector<E> unit = {E(2), E(1), q(-1, 2), E(3)};
  CHECK_THROWS_AS(s_factor(unit, 1, 2, 3, 4), Degenerate);  // 1 + ac = 0 pole
}

TEST_CASE("explicit isotropic vectors") {
  auto xi = fixed_xi();
  TetIndex idx = index_tets(all_tets(6));
  auto phi = FaceFactorTable<E>::family1(xi, all_faces2(6));
  MoveInstance mv = builtin_move(BuiltinMove::ThreeThree);

  std::vector<FirstOrderOperator<E>> vecs;
  std::vector<GE> weights;
  for (const Pentachoron& u : mv.lhs.simplices) {
    vecs.push_back(explicit_isotropic_vector(u, MoveSide::Lhs, xi, idx));
    weights.push_back(weight_family1(u, phi, idx));
  }
  for (const Pentachoron& u : mv.rhs.simplices) {
    vecs.push_back(explicit_isotropic_vector(u, MoveSide::Rhs, xi, idx));
    weights.push_back(weight_family1(u, phi, idx));
  }
  REQUIRE(vecs.size() == 6);
  for (std::size_t i = 0; i < vecs.size(); ++i)
    for (std::size_t j = i; j < vecs.size(); ++j) CHECK(pairing(vecs[i], vecs[j]).is_zero());
  for (std::size_t i = 0; i < vecs.size(); ++i) CHECK(apply(vecs[i], weights[i]).is_zero());

  // each vector touches exactly its three inner tetrahedra
  CHECK(vecs[0].support() == std::vector<int>({idx.index_of(Tet{1, 2, 4, 5}), idx.index_of(Tet{1, 3, 4, 5}),
                                               idx.index_of(Tet{2, 3, 4, 5})}));

  CHECK_THROWS_AS(explicit_isotropic_vector(mv.rhs.simplices[0], MoveSide::Lhs, xi, idx),
                  std::invalid_argument);
  CHECK_THROWS_AS(explicit_isotropic_vector(mv.lhs.simplices[0], MoveSide::Rhs, xi, idx),
                  std::invalid_argument);
}

}  // TEST_SUITE

#include "doctest.h"
#include "gpach/linalg.hpp"
#include "gpach/random.hpp"

using namespace gpach;

namespace {

using E = ExactScalar;

Matrix<E> from_rows(int rows, int cols, std::initializer_list<long> entries) {
  Matrix<E> m(rows, cols);
  auto it = entries.begin();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = E(*it++);
  return m;
}

Matrix<E> random_matrix(int rows, int cols, RandomSource& rng) {
  Matrix<E> m(rows, cols);
  for (E& v : m.a) v = E(rng.rational(9, 9));
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("rank of frozen matrices") {
  CHECK(rank(from_rows(2, 2, {1, 2, 2, 4})) == 1);
  CHECK(rank(from_rows(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})) == 3);
  CHECK(rank(from_rows(2, 3, {1, 2, 3, 4, 5, 6})) == 2);
  CHECK(rank(Matrix<E>(3, 4)) == 0);
}

TEST_CASE("row reduction returns pivot columns") {
  Matrix<E> m = from_rows(2, 3, {0, 1, 2, 0, 2, 4});
  std::vector<int> pivots = row_reduce(m);
  CHECK(pivots == std::vector<int>({1}));
  CHECK(m.at(0, 1) == E(1));
  CHECK(m.at(0, 2) == E(2));
  CHECK(m.at(1, 1).is_zero());
}

TEST_CASE("kernel basis spans the null space") {
  Matrix<E> m = from_rows(1, 2, {1, 2});
  auto basis = kernel_basis(m);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0][0] == E(-2));
  CHECK(basis[0][1] == E(1));

  RandomSource rng(31);
  Matrix<E> a = random_matrix(3, 5, rng);
  auto vecs = kernel_basis(a);
  CHECK(int(vecs.size()) == 5 - rank(a));
  for (const auto& v : vecs)
    for (int r = 0; r < a.rows; ++r) {
      E acc(0);
      for (int c = 0; c < a.cols; ++c) acc += a.at(r, c) * v[std::size_t(c)];
      CHECK(acc.is_zero());
    }
}

TEST_CASE("matrix inverse round-trip") {
  RandomSource rng(7);
  Matrix<E> m(5, 5);
  do
    m = random_matrix(5, 5, rng);
  while (rank(m) != 5);
  auto inv = inverse_matrix(m);
  REQUIRE(inv.has_value());
  Matrix<E> prod = m * *inv;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) CHECK(prod.at(r, c) == (r == c ? E(1) : E(0)));

  CHECK(!inverse_matrix(from_rows(2, 2, {1, 2, 2, 4})).has_value());
  CHECK(!inverse_matrix(from_rows(2, 2, {0, 0, 0, 1})).has_value());
  CHECK_THROWS_AS(inverse_matrix(Matrix<E>(2, 3)), std::invalid_argument);
}

TEST_CASE("matrix operations") {
  Matrix<E> m = from_rows(2, 3, {1, 2, 3, 4, 5, 6});
  Matrix<E> t = m.transposed();
  CHECK(t.rows == 3);
  CHECK(t.at(2, 1) == E(6));

  Matrix<E> p = m * t;
  CHECK(p.at(0, 0) == E(14));
  CHECK(p.at(1, 0) == E(32));
  CHECK_THROWS_AS(m * m, std::invalid_argument);

  CHECK(Matrix<E>(2, 2).is_zero());
  CHECK(!m.is_zero());
}

TEST_CASE("float pivots respect the tolerance floor") {
  Matrix<FloatScalar> m(2, 2);
  m.at(0, 0) = FloatScalar(1.0);
  m.at(1, 1) = FloatScalar(1e-14);
  CHECK(rank(m) == 1);                                // below the default 1e-10 floor
  CHECK(rank(m, Tolerance{1e-16, 1e-8}) == 2);        // floor lowered

  auto inv = inverse_matrix(m);
  CHECK(!inv.has_value());
}

}  // TEST_SUITE

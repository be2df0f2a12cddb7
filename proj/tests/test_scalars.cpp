#include "doctest.h"
#include "gpach/scalars.hpp"

using namespace gpach;

namespace {

ExactScalar q(long num, long den) { return ExactScalar(mpq_class(num, den)); }
ExactScalar qi(long rn, long rd, long in_, long id) {
  return ExactScalar(mpq_class(rn, rd), mpq_class(in_, id));
}

}  // namespace

TEST_SUITE("scalars") {

TEST_CASE("exact field arithmetic") {
  ExactScalar i = ExactScalar::unit_i();
  CHECK(i * i == ExactScalar(-1));

  ExactScalar a = qi(3, 4, 1, 2);
  CHECK(a * conj(a) == q(13, 16));
  CHECK(a + (-a) == ExactScalar(0));

  ExactScalar b = qi(-2, 7, 5, 3);
  CHECK((a / b) * b == a);
  CHECK(a - b + b == a);
  CHECK_THROWS_AS(a / ExactScalar(0), std::domain_error);

  CHECK(ExactScalar(2).abs_approx() == doctest::Approx(2.0));
  CHECK(qi(3, 1, 4, 1).abs_approx() == doctest::Approx(5.0));
}

TEST_CASE("exact square roots in the Gaussian rationals") {
  CHECK(*scalar_sqrt(q(9, 4)) == q(3, 2));
  CHECK(*scalar_sqrt(ExactScalar(0)) == ExactScalar(0));
  CHECK(*scalar_sqrt(ExactScalar(-4)) == qi(0, 1, 2, 1));
  // (1 + i)^2 = 2i
  CHECK(*scalar_sqrt(qi(0, 1, 2, 1)) == qi(1, 1, 1, 1));

  ExactScalar w = qi(3, 7, 2, 5);
  CHECK(*scalar_sqrt(w * w) == w);

  CHECK(!scalar_sqrt(ExactScalar(3)).has_value());
  CHECK(!scalar_sqrt(q(-3, 5)).has_value());
  CHECK(!scalar_sqrt(qi(1, 1, 1, 1)).has_value());  // |1+i| is irrational

  FloatScalar fi = *scalar_sqrt(FloatScalar(-1.0));
  CHECK((fi - FloatScalar::unit_i()).abs_approx() < 1e-15);
}

TEST_CASE("rational circle points") {
  CirclePoint<ExactScalar> p = circle_point<ExactScalar>(mpq_class(1, 2));
  CHECK(p.c == q(3, 5));
  CHECK(p.s == q(4, 5));

  for (mpq_class t : {mpq_class(0), mpq_class(-3, 7), mpq_class(12, 5), mpq_class(99)}) {
    CirclePoint<ExactScalar> e = circle_point<ExactScalar>(t);
    CHECK(e.c * e.c + e.s * e.s == ExactScalar(1));
  }
  CHECK(circle_point<ExactScalar>(0).c == ExactScalar(1));
  CHECK(circle_point<ExactScalar>(0).s == ExactScalar(0));

  CirclePoint<FloatScalar> f = circle_point<FloatScalar>(mpq_class(1, 2));
  CHECK((f.c * f.c + f.s * f.s - FloatScalar(1.0)).abs_approx() < 1e-15);
}

TEST_CASE("rational parsing") {
  CHECK(*parse_rational("3/4") == mpq_class(3, 4));
  CHECK(*parse_rational("-2") == mpq_class(-2));
  CHECK(*parse_rational("+5/10") == mpq_class(1, 2));
  CHECK(*parse_rational("007") == mpq_class(7));
  for (const char* bad : {"", "abc", "1/0", "1/2/3", "2/", "/3", "1.5", "- 2"})
    CHECK_MESSAGE(!parse_rational(bad).has_value(), bad);
}

TEST_CASE("zero tests are structural for the exact backend") {
  Tolerance tol;
  CHECK(tol.zero == 1e-10);
  CHECK(tol.residual == 1e-8);

  ExactScalar tiny = q(1, 1000000000000L);
  CHECK(!near_zero(tiny, tol));
  CHECK(near_zero(ExactScalar(0), tol));

  CHECK(near_zero(FloatScalar(1e-12), tol));
  CHECK(!near_zero(FloatScalar(1e-8), tol));

  FloatScalar f = to_float(qi(1, 2, -1, 4));
  CHECK(f.v.real() == doctest::Approx(0.5));
  CHECK(f.v.imag() == doctest::Approx(-0.25));
}

TEST_CASE("printing") {
  CHECK(q(-3, 4).str() == "-3/4");
  CHECK(qi(1, 2, -2, 3).str() == "(1/2-2/3i)");
  CHECK(ExactScalar(7).str() == "7");
}

}  // TEST_SUITE

#include "doctest.h"
#include "gpach/operators.hpp"
#include "gpach/random.hpp"

using namespace gpach;

namespace {

using E = ExactScalar;
using GE = GrassmannElement<E>;
using Op = FirstOrderOperator<E>;

struct Fixture {
  GeneratorRegistry reg;
  explicit Fixture(int n) {
    for (int i = 0; i < n; ++i) reg.add("t" + std::to_string(i));
  }
  GE mono(Mask m) const { return GE::monomial(&reg, m, E(1)); }
};

std::vector<int> iota_support(int n) {
  std::vector<int> s;
  for (int i = 0; i < n; ++i) s.push_back(i);
  return s;
}

Matrix<E> random_antisymmetric(int n, RandomSource& rng) {
  Matrix<E> alpha(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      alpha.at(i, j) = E(rng.rational(9, 9));
      alpha.at(j, i) = -alpha.at(i, j);
    }
  return alpha;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("apply and pairing on frozen operators") {
  Fixture fx(3);
  Op d(&fx.reg);  // d/dt0 + 2 t1
  d.add_beta(0, E(1));
  d.add_gamma(1, E(2));
  Op e(&fx.reg);  // 3 d/dt1 + t0
  e.add_beta(1, E(3));
  e.add_gamma(0, E(1));

  CHECK(pairing(d, e) == E(7));
  CHECK(pairing(d, d) == E(0));  // beta and gamma sit on different generators

  Op f(&fx.reg);  // d/dt0 + 5 t0
  f.add_beta(0, E(1));
  f.add_gamma(0, E(5));
  CHECK(pairing(f, f) == E(10));

  GE m = fx.mono(0b11);  // t0 t1
  CHECK(apply(d, m) == fx.mono(0b10));
  CHECK(apply(e, m) == -(E(3) * fx.mono(0b01)));
  // d applied to t1: derivative term vanishes, 2 t1 t1 vanishes
  CHECK(apply(d, fx.mono(0b10)).is_zero());
}

TEST_CASE("operator arithmetic prunes exact zeros") {
  Fixture fx(3);
  Op d(&fx.reg);
  d.add_beta(0, E(1));
  d.add_gamma(2, E(mpq_class(5, 3)));
  CHECK(d.support() == std::vector<int>({0, 2}));
  CHECK(d.max_abs() == doctest::Approx(5.0 / 3.0));

  Op minus = E(-1) * d;
  Op sum = d + minus;
  CHECK(sum.support().empty());
  CHECK(sum.beta.empty());
  CHECK(sum.gamma.empty());

  Op mixed(&fx.reg);
  mixed.add_beta(1, E(2));
  mixed.add_beta(1, E(-2));
  CHECK(mixed.beta.empty());
}

TEST_CASE("isotropy detection") {
  Fixture fx(3);
  RandomSource rng(11);
  Matrix<E> alpha = random_antisymmetric(3, rng);
  OperatorSpace<E> space = gaussian_annihilators(alpha, iota_support(3), &fx.reg);
  CHECK(space.basis.size() == 3);
  CHECK(is_isotropic(space));
  CHECK(max_pairing_abs(space) == 0.0);
  CHECK(space_support(space) == iota_support(3));

  OperatorSpace<E> bad{&fx.reg, {}};
  Op d(&fx.reg), x(&fx.reg);
  d.add_beta(0, E(1));
  x.add_gamma(0, E(1));
  bad.basis = {d, x};
  CHECK(!is_isotropic(bad));
  CHECK(max_pairing_abs(bad) == doctest::Approx(1.0));
}

TEST_CASE("annihilator elements and their parity") {
  Fixture fx(3);
  OperatorSpace<E> derivs{&fx.reg, {}};
  OperatorSpace<E> gens{&fx.reg, {}};
  for (int i = 0; i < 3; ++i) {
    Op d(&fx.reg), x(&fx.reg);
    d.add_beta(i, E(1));
    x.add_gamma(i, E(1));
    derivs.basis.push_back(d);
    gens.basis.push_back(x);
  }
  // pure derivatives kill the constants; pure generators kill the top monomial
  auto [w1, p1] = annihilator_element(derivs, iota_support(3));
  CHECK(w1 == GE::scalar(&fx.reg, E(1)));
  CHECK(p1 == Parity::Even);
  auto [w2, p2] = annihilator_element(gens, iota_support(3));
  CHECK(w2 == fx.mono(0b111));
  CHECK(p2 == Parity::Odd);

  // a 1-operator space over 2 generators has a 2-dimensional kernel
  OperatorSpace<E> thin{&fx.reg, {derivs.basis[0]}};
  CHECK_THROWS_AS(annihilator_element(thin, std::vector<int>{0, 1}), std::invalid_argument);

  // operators must stay inside the declared support
  OperatorSpace<E> outside{&fx.reg, {gens.basis[2]}};
  CHECK_THROWS_AS(annihilator_element(outside, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("gaussian coefficient round-trip") {
  Fixture fx(4);
  RandomSource rng(17);
  Matrix<E> alpha = random_antisymmetric(4, rng);
  OperatorSpace<E> space = gaussian_annihilators(alpha, iota_support(4), &fx.reg);
  Matrix<E> back = gaussian_coefficients(space, iota_support(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(back.at(i, j) == alpha.at(i, j));

  GE w = gaussian_weight(alpha, iota_support(4), &fx.reg);
  CHECK(w.coefficient(0) == E(1));
  CHECK(w.coefficient(0b0011) == alpha.at(0, 1));
  CHECK(w.coefficient(0b1010) == alpha.at(1, 3));
  for (const Op& op : space.basis) CHECK(apply(op, w).is_zero());

  // the annihilator of the space is the weight itself, normalized at 1
  auto [ann, par] = annihilator_element(space, iota_support(4));
  CHECK(par == Parity::Even);
  CHECK(ann == w);
}

TEST_CASE("two-generator gaussian weight is explicit") {
  Fixture fx(2);
  Matrix<E> alpha(2, 2);
  alpha.at(0, 1) = E(mpq_class(4, 7));
  alpha.at(1, 0) = -alpha.at(0, 1);
  GE w = gaussian_weight(alpha, iota_support(2), &fx.reg);
  GE want = GE::scalar(&fx.reg, E(1)) + E(mpq_class(4, 7)) * fx.mono(0b11);
  CHECK(w == want);
}

TEST_CASE("singular derivative block raises the odd-component error") {
  Fixture fx(2);
  OperatorSpace<E> gens{&fx.reg, {}};
  for (int i = 0; i < 2; ++i) {
    Op x(&fx.reg);
    x.add_gamma(i, E(1));
    gens.basis.push_back(x);
  }
  CHECK_THROWS_AS(gaussian_coefficients(gens, iota_support(2)), OddComponentError);

  // non-isotropic input fails the antisymmetry audit instead
  OperatorSpace<E> skew{&fx.reg, {}};
  Op d0(&fx.reg), d1(&fx.reg);
  d0.add_beta(0, E(1));
  d0.add_gamma(1, E(1));
  d1.add_beta(1, E(1));
  skew.basis = {d0, d1};
  CHECK_THROWS_AS(gaussian_coefficients(skew, iota_support(2)), std::invalid_argument);

  OperatorSpace<E> wrong_size{&fx.reg, {d1}};
  CHECK_THROWS_AS(gaussian_coefficients(wrong_size, iota_support(2)), std::invalid_argument);
}

TEST_CASE("derivative-variable interchange flips parity with odd support") {
  for (int n : {4, 5}) {
    Fixture fx(n);
    RandomSource rng(23 + std::uint64_t(n));
    Matrix<E> alpha = random_antisymmetric(n, rng);
    OperatorSpace<E> space = gaussian_annihilators(alpha, iota_support(n), &fx.reg);
    OperatorSpace<E> swapped{&fx.reg, {}};
    for (const Op& op : space.basis) {
      Op flip(&fx.reg);
      for (const auto& [t, v] : op.beta) flip.add_gamma(t, v);
      for (const auto& [t, v] : op.gamma) flip.add_beta(t, v);
      swapped.basis.push_back(flip);
    }
    auto [w, p] = annihilator_element(space, iota_support(n));
    auto [ws, ps] = annihilator_element(swapped, iota_support(n));
    (void)w, (void)ws;
    CHECK(p == Parity::Even);
    CHECK(ps == (n % 2 ? Parity::Odd : Parity::Even));
  }
}

}  // TEST_SUITE

#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gpach/grassmann.hpp"
#include "gpach/linalg.hpp"
#include "gpach/scalars.hpp"

namespace gpach {

// Sum_t (beta_t d/dx_t + gamma_t x_t), sparse over a registry.
template <class S>
struct FirstOrderOperator {
  const GeneratorRegistry* reg = nullptr;
  std::map<int, S> beta, gamma;

  explicit FirstOrderOperator(const GeneratorRegistry* r) : reg(r) {}

  void add_beta(int t, const S& v) { accumulate(beta, t, v); }
  void add_gamma(int t, const S& v) { accumulate(gamma, t, v); }

  FirstOrderOperator& operator+=(const FirstOrderOperator& o) {
    if (reg != o.reg) throw std::invalid_argument("FirstOrderOperator: registry mismatch");
    for (const auto& [t, v] : o.beta) add_beta(t, v);
    for (const auto& [t, v] : o.gamma) add_gamma(t, v);
    return *this;
  }
  FirstOrderOperator& operator*=(const S& c) {
    for (auto& [t, v] : beta) v *= c;
    for (auto& [t, v] : gamma) v *= c;
    prune();
    return *this;
  }
  friend FirstOrderOperator operator+(FirstOrderOperator a, const FirstOrderOperator& b) { return a += b; }
  friend FirstOrderOperator operator*(const S& c, FirstOrderOperator a) { return a *= c; }

  std::vector<int> support() const {
    std::vector<int> s;
    for (const auto& [t, v] : beta) s.push_back(t);
    for (const auto& [t, v] : gamma) s.push_back(t);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& [t, v] : beta) m = std::max(m, v.abs_approx());
    for (const auto& [t, v] : gamma) m = std::max(m, v.abs_approx());
    return m;
  }

 private:
  static void accumulate(std::map<int, S>& coeffs, int t, const S& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = coeffs.emplace(t, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) coeffs.erase(it);
    }
  }
  void prune() {
    for (auto it = beta.begin(); it != beta.end();)
      it = it->second.is_zero() ? beta.erase(it) : std::next(it);
    for (auto it = gamma.begin(); it != gamma.end();)
      it = it->second.is_zero() ? gamma.erase(it) : std::next(it);
  }
};

template <class S>
GrassmannElement<S> apply(const FirstOrderOperator<S>& d, const GrassmannElement<S>& f) {
  GrassmannElement<S> r(f.registry());
  for (const auto& [t, v] : d.beta) {
    GrassmannElement<S> part = left_derivative(f, t);
    part *= v;
    r += part;
  }
  for (const auto& [t, v] : d.gamma) {
    GrassmannElement<S> part = GrassmannElement<S>::generator(f.registry(), t) * f;
    part *= v;
    r += part;
  }
  return r;
}

// Anticommutator pairing <d1, d2> = Sum_t (beta1 gamma2 + beta2 gamma1).
template <class S>
S pairing(const FirstOrderOperator<S>& d1, const FirstOrderOperator<S>& d2) {
  if (d1.reg != d2.reg) throw std::invalid_argument("pairing: registry mismatch");
  S acc(0);
  for (const auto& [t, b] : d1.beta) {
    auto it = d2.gamma.find(t);
    if (it != d2.gamma.end()) acc += b * it->second;
  }
  for (const auto& [t, b] : d2.beta) {
    auto it = d1.gamma.find(t);
    if (it != d1.gamma.end()) acc += b * it->second;
  }
  return acc;
}

template <class S>
struct OperatorSpace {
  const GeneratorRegistry* reg = nullptr;
  std::vector<FirstOrderOperator<S>> basis;
};

template <class S>
double max_pairing_abs(const OperatorSpace<S>& space) {
  double m = 0;
  for (std::size_t i = 0; i < space.basis.size(); ++i)
    for (std::size_t j = i; j < space.basis.size(); ++j)
      m = std::max(m, pairing(space.basis[i], space.basis[j]).abs_approx());
  return m;
}

template <class S>
bool is_isotropic(const OperatorSpace<S>& space, const Tolerance& tol = {}) {
  for (std::size_t i = 0; i < space.basis.size(); ++i)
    for (std::size_t j = i; j < space.basis.size(); ++j)
      if (!near_zero(pairing(space.basis[i], space.basis[j]), tol)) return false;
  return true;
}

template <class S>
std::vector<int> space_support(const OperatorSpace<S>& space) {
  std::vector<int> s;
  for (const auto& op : space.basis)
    for (int t : op.support()) s.push_back(t);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

struct OddComponentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One-dimensional joint kernel of a 5-dimensional isotropic space, normalized so the
// lowest-mask nonzero coefficient is 1.
template <class S>
std::pair<GrassmannElement<S>, Parity> annihilator_element(const OperatorSpace<S>& space,
                                                           const std::vector<int>& support,
                                                           const Tolerance& tol = {}) {
  const int n = int(support.size());
  const int dim = 1 << n;
  // unknown j = coefficient of the j-th subset of `support` (subset bits follow position order)
  std::vector<Mask> monomials(std::size_t(dim), 0);
  for (int j = 0; j < dim; ++j) {
    Mask m = 0;
    for (int b = 0; b < n; ++b)
      if (j & (1 << b)) m |= Mask(1) << support[std::size_t(b)];
    monomials[std::size_t(j)] = m;
  }
  std::map<Mask, int> column_of;
  for (int j = 0; j < dim; ++j) column_of[monomials[std::size_t(j)]] = j;

  Matrix<S> sys(int(space.basis.size()) * dim, dim);
  int row_base = 0;
  const GeneratorRegistry* reg = space.reg;
  for (const auto& op : space.basis) {
    for (int j = 0; j < dim; ++j) {
      GrassmannElement<S> image = apply(op, GrassmannElement<S>::monomial(reg, monomials[std::size_t(j)], S(1)));
      for (const auto& [m, c] : image.terms()) {
        auto it = column_of.find(m);
        if (it == column_of.end()) throw std::invalid_argument("annihilator_element: operator leaves the support");
        sys.at(row_base + it->second, j) += c;
      }
    }
    row_base += dim;
  }

  std::vector<std::vector<S>> kernel = kernel_basis(sys, tol);
  if (kernel.size() != 1) throw std::invalid_argument("annihilator_element: kernel dimension is not 1");

  GrassmannElement<S> w(reg);
  for (int j = 0; j < dim; ++j) w.add_term(monomials[std::size_t(j)], kernel[0][std::size_t(j)]);
  // normalize on the lowest mask present
  S lead = w.terms().begin()->second;
  w *= S(1) / lead;
  return {w, parity(w)};
}

template <class S>
std::pair<GrassmannElement<S>, Parity> annihilator_element(const OperatorSpace<S>& space,
                                                           const Tolerance& tol = {}) {
  return annihilator_element(space, space_support(space), tol);
}

// Writes the basis as (B | G) over `support`; alpha = -B^{-1} G, checked antisymmetric.
template <class S>
Matrix<S> gaussian_coefficients(const OperatorSpace<S>& space, const std::vector<int>& support,
                                const Tolerance& tol = {}) {
  const int n = int(support.size());
  if (int(space.basis.size()) != n)
    throw std::invalid_argument("gaussian_coefficients: basis size must match support");
  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[support[std::size_t(i)]] = i;
  Matrix<S> b(n, n), g(n, n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [t, v] : space.basis[std::size_t(i)].beta) b.at(i, pos.at(t)) = v;
    for (const auto& [t, v] : space.basis[std::size_t(i)].gamma) g.at(i, pos.at(t)) = v;
  }
  auto b_inv = inverse_matrix(b, tol);
  if (!b_inv) throw OddComponentError("gaussian_coefficients: derivative block is singular (odd or degenerate component)");
  Matrix<S> alpha = (*b_inv) * g;
  for (S& v : alpha.a) v = -v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!near_zero(alpha.at(i, j) + alpha.at(j, i),
                     Tolerance{tol.zero * std::max(1.0, alpha.at(i, j).abs_approx()), tol.residual}))
        throw std::invalid_argument("gaussian_coefficients: result is not antisymmetric (input not isotropic?)");
  return alpha;
}

template <class S>
Matrix<S> gaussian_coefficients(const OperatorSpace<S>& space, const Tolerance& tol = {}) {
  return gaussian_coefficients(space, space_support(space), tol);
}

// exp(1/2 Sum alpha_{t1 t2} x_{t1} x_{t2}) over `support`.
template <class S>
GrassmannElement<S> gaussian_weight(const Matrix<S>& alpha, const std::vector<int>& support,
                                    const GeneratorRegistry* reg) {
  const int n = int(support.size());
  GrassmannElement<S> q(reg);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mask m = (Mask(1) << support[std::size_t(i)]) | (Mask(1) << support[std::size_t(j)]);
      // support indices ascend, so x_i x_j is already canonical
      q.add_term(m, alpha.at(i, j));
    }
  return exponential(q);
}

// Operators d/dx_t - Sum_{t'} alpha_{t t'} x_{t'} annihilating the Gaussian weight.
template <class S>
OperatorSpace<S> gaussian_annihilators(const Matrix<S>& alpha, const std::vector<int>& support,
                                       const GeneratorRegistry* reg) {
  const int n = int(support.size());
  OperatorSpace<S> space{reg, {}};
  for (int i = 0; i < n; ++i) {
    FirstOrderOperator<S> d(reg);
    d.add_beta(support[std::size_t(i)], S(1));
    for (int j = 0; j < n; ++j) d.add_gamma(support[std::size_t(j)], -alpha.at(i, j));
    space.basis.push_back(std::move(d));
  }
  return space;
}

}  // namespace gpach

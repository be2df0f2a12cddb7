#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpach/scalars.hpp"

namespace gpach {

// Monomial as a bitset of generator indices; canonical order is ascending index.
using Mask = std::uint64_t;

class GeneratorRegistry {
 public:
  int add(const std::string& label);
  int index_of(const std::string& label) const;  // -1 if absent
  const std::string& label(int index) const;
  int size() const { return int(labels_.size()); }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
};

enum class Parity { Even, Odd, Mixed };

// Transpositions needed to interleave two disjoint ascending masks.
inline int interleave_swaps(Mask a, Mask b) {
  int swaps = 0;
  while (b) {
    int j = std::countr_zero(b);
    swaps += std::popcount(a >> (j + 1));
    b &= b - 1;
  }
  return swaps;
}

template <class S>
class GrassmannElement {
 public:
  explicit GrassmannElement(const GeneratorRegistry* reg) : reg_(reg) {
    if (!reg) throw std::invalid_argument("GrassmannElement: null registry");
  }

  static GrassmannElement scalar(const GeneratorRegistry* reg, const S& c) {
    GrassmannElement e(reg);
    e.add_term(0, c);
    return e;
  }
  static GrassmannElement generator(const GeneratorRegistry* reg, int index) {
    return monomial(reg, Mask(1) << index, S(1));
  }
  static GrassmannElement monomial(const GeneratorRegistry* reg, Mask m, const S& c) {
    GrassmannElement e(reg);
    e.add_term(m, c);
    return e;
  }

  const GeneratorRegistry* registry() const { return reg_; }
  const std::map<Mask, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coefficient(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }

  void add_term(Mask m, const S& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  GrassmannElement& operator+=(const GrassmannElement& o) {
    check_registry(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  GrassmannElement& operator-=(const GrassmannElement& o) {
    check_registry(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  GrassmannElement operator-() const {
    GrassmannElement r(reg_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  GrassmannElement& operator*=(const S& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= c;
      if (it->second.is_zero())
        it = terms_.erase(it);
      else
        ++it;
    }
    return *this;
  }

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(GrassmannElement a, const S& c) { return a *= c; }
  friend GrassmannElement operator*(const S& c, GrassmannElement a) { return a *= c; }

  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    a.check_registry(b);
    GrassmannElement r(a.reg_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        if (ma & mb) continue;
        S c = ca * cb;
        if (interleave_swaps(ma, mb) & 1) c = -c;
        r.add_term(ma | mb, c);
      }
    return r;
  }

  friend bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
    return a.reg_ == b.reg_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const GrassmannElement& a, const GrassmannElement& b) { return !(a == b); }

  double max_abs() const {
    double m = 0;
    for (const auto& [mask, c] : terms_) m = std::max(m, c.abs_approx());
    return m;
  }

  void check_registry(const GrassmannElement& o) const {
    if (reg_ != o.reg_) throw std::invalid_argument("GrassmannElement: registry mismatch");
  }

 private:
  const GeneratorRegistry* reg_;
  std::map<Mask, S> terms_;
};

template <class S>
GrassmannElement<S> left_derivative(const GrassmannElement<S>& f, int index) {
  GrassmannElement<S> r(f.registry());
  Mask bit = Mask(1) << index;
  for (const auto& [m, c] : f.terms()) {
    if (!(m & bit)) continue;
    S v = c;
    if (std::popcount(m & (bit - 1)) & 1) v = -v;
    r.add_term(m & ~bit, v);
  }
  return r;
}

template <class S>
GrassmannElement<S> right_derivative(const GrassmannElement<S>& f, int index) {
  GrassmannElement<S> r(f.registry());
  Mask bit = Mask(1) << index;
  for (const auto& [m, c] : f.terms()) {
    if (!(m & bit)) continue;
    S v = c;
    if (std::popcount(m >> (index + 1)) & 1) v = -v;
    r.add_term(m & ~bit, v);
  }
  return r;
}

// Iterated right derivatives; the first listed variable is the innermost integration.
template <class S>
GrassmannElement<S> berezin_integrate(const GrassmannElement<S>& f, const std::vector<int>& vars) {
  GrassmannElement<S> r = f;
  for (int v : vars) r = right_derivative(r, v);
  return r;
}

template <class S>
Parity parity(const GrassmannElement<S>& f) {
  bool even = false, odd = false;
  for (const auto& [m, c] : f.terms())
    (std::popcount(m) & 1 ? odd : even) = true;
  if (odd && even) return Parity::Mixed;
  if (odd) return Parity::Odd;
  return Parity::Even;
}

template <class S>
std::set<int> degrees(const GrassmannElement<S>& f) {
  std::set<int> d;
  for (const auto& [m, c] : f.terms()) d.insert(std::popcount(m));
  return d;
}

template <class S>
GrassmannElement<S> exponential(const GrassmannElement<S>& f) {
  if (!f.coefficient(0).is_zero())
    throw std::invalid_argument("exponential: nonzero constant term");
  if (parity(f) != Parity::Even)
    throw std::invalid_argument("exponential: argument must be even");
  GrassmannElement<S> acc = GrassmannElement<S>::scalar(f.registry(), S(1));
  GrassmannElement<S> power = acc;
  for (long k = 1; !power.is_zero(); ++k) {
    power = power * f;
    power *= S(1) / S(k);
    acc += power;
  }
  return acc;
}

// Inverse of c + n with c an invertible scalar and n nilpotent, via geometric series.
template <class S>
GrassmannElement<S> inverse(const GrassmannElement<S>& f) {
  S c = f.coefficient(0);
  if (c.is_zero()) throw std::domain_error("inverse: constant term is zero");
  GrassmannElement<S> n = f - GrassmannElement<S>::scalar(f.registry(), c);
  S inv_c = S(1) / c;
  GrassmannElement<S> acc = GrassmannElement<S>::scalar(f.registry(), inv_c);
  GrassmannElement<S> term = acc;
  while (!term.is_zero()) {
    term = term * n;
    term *= -inv_c;
    acc += term;
  }
  return acc;
}

template <class S>
GrassmannElement<S> divide(const GrassmannElement<S>& f, const GrassmannElement<S>& g) {
  return f * inverse(g);
}

// Substitution x_index -> c * x_index.
template <class S>
GrassmannElement<S> scale_generator(const GrassmannElement<S>& f, int index, const S& c) {
  GrassmannElement<S> r(f.registry());
  Mask bit = Mask(1) << index;
  for (const auto& [m, coeff] : f.terms()) r.add_term(m, (m & bit) ? coeff * c : coeff);
  return r;
}

template <class S>
std::string to_string(const GrassmannElement<S>& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : f.terms()) {
    S v = c;
    bool negative;
    if constexpr (is_exact_v<S>)
      negative = c.re < 0 || (c.re == 0 && c.im < 0);
    else
      negative = c.v.real() < 0 || (c.v.real() == 0 && c.v.imag() < 0);
    if (negative) v = -v;
    if (out.empty())
      out += negative ? "- " : "";
    else
      out += negative ? " - " : " + ";
    if (m == 0) {
      out += v.str();
    } else {
      if (!(v == S(1))) out += v.str() + "*";
      Mask rest = m;
      while (rest) {
        int j = std::countr_zero(rest);
        out += "x_{" + f.registry()->label(j) + "}";
        rest &= rest - 1;
      }
    }
  }
  return out;
}

}  // namespace gpach

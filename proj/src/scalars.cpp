#include "gpach/scalars.hpp"

#include <cctype>
#include <cstdio>

namespace gpach {

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  mpq_class n = o.re * o.re + o.im * o.im;
  if (n == 0) throw std::domain_error("ExactScalar: division by zero");
  mpq_class r = (re * o.re + im * o.im) / n;
  im = (im * o.re - re * o.im) / n;
  re = r;
  return *this;
}

std::string ExactScalar::str() const {
  if (im == 0) return re.get_str();
  std::string i = im.get_str();
  if (re == 0) return i + "i";
  std::string out = "(" + re.get_str();
  if (im < 0)
    out += "-" + mpq_class(-im).get_str();
  else
    out += "+" + i;
  return out + "i)";
}

std::string FloatScalar::str() const {
  char buf[64];
  if (v.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", v.real());
    return buf;
  }
  std::string out = "(";
  std::snprintf(buf, sizeof buf, "%.17g", v.real());
  out += buf;
  std::snprintf(buf, sizeof buf, "%+.17g", v.imag());
  out += buf;
  return out + "i)";
}

namespace {

// Rational square root: numerator and denominator must both be perfect squares.
std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (q < 0) return std::nullopt;
  if (q == 0) return mpq_class(0);
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return mpq_class(rn) / mpq_class(rd);
}

}  // namespace

std::optional<ExactScalar> scalar_sqrt(const ExactScalar& x) {
  if (x.im == 0) {
    if (x.re >= 0) {
      auto r = rational_sqrt(x.re);
      if (!r) return std::nullopt;
      return ExactScalar(*r);
    }
    auto r = rational_sqrt(mpq_class(-x.re));
    if (!r) return std::nullopt;
    return ExactScalar(mpq_class(0), *r);
  }
  // w = c + d i with c^2 - d^2 = re, 2cd = im; needs |x| rational and (re+|x|)/2 a square.
  auto norm = rational_sqrt(x.re * x.re + x.im * x.im);
  if (!norm) return std::nullopt;
  auto c = rational_sqrt((x.re + *norm) / 2);
  if (!c || *c == 0) return std::nullopt;
  mpq_class d = x.im / (2 * (*c));
  return ExactScalar(*c, d);
}

CirclePoint<ExactScalar> exact_circle_point(const mpq_class& t) {
  mpq_class den = 1 + t * t;
  return CirclePoint<ExactScalar>{ExactScalar((1 - t * t) / den), ExactScalar(2 * t / den)};
}

std::optional<mpq_class> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') ++pos;
  if (pos >= text.size() || !std::isdigit((unsigned char)text[pos])) return std::nullopt;
  bool slash = false;
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (text[i] == '/') {
      if (slash || i + 1 >= text.size()) return std::nullopt;
      slash = true;
      continue;
    }
    if (!std::isdigit((unsigned char)text[i])) return std::nullopt;
  }
  mpq_class q;
  if (q.set_str(text[0] == '+' ? text.substr(1) : text, 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

}  // namespace gpach

#include "thompson/rational.hpp"

#include <stdexcept>

namespace thompson {

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

Rational pow2(long k) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? Rational(Integer(1), p) : Rational(p);
}

Rational pow(const Rational& base, long exponent) {
  Rational result = 1;
  Rational b = exponent < 0 ? Rational(1 / base) : base;
  for (long e = exponent < 0 ? -exponent : exponent; e > 0; --e) result *= b;
  result.canonicalize();
  return result;
}

}  // namespace thompson

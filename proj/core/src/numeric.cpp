#include "multifrac/numeric.hpp"

#include "multifrac/errors.hpp"

#include <mpfr.h>

#include <cctype>
#include <string>

namespace multifrac {

namespace {

BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw ParseError("malformed integer '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
      throw ParseError("malformed integer '" + std::string(text) + "'");
    }
  }
  std::string s(text[0] == '+' ? text.substr(1) : text);
  return BigInt(s, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal with optional exponent.
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    BigInt ex = parse_integer(text.substr(e + 1));
    if (!ex.fits_slong_p() || abs(ex) > 100000) throw ParseError("exponent out of range");
    exponent = ex.get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw ParseError("malformed number '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw ParseError("malformed number '" + std::string(text) + "'");
  Rational r(BigInt(digits, 10));
  long shift = exponent - frac_digits;
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift >= 0) {
    r *= ten_pow;
  } else {
    r /= ten_pow;
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

Rational pow2(long e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

Rational pow(const Rational& base, unsigned long e) {
  Rational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), base.get_num_mpz_t(), e);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), base.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

BigInt floor(const Rational& x) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

HighFloat to_high(const Rational& x) {
  HighFloat r;
  mpfr_set_q(r.backend().data(), x.get_mpq_t(), MPFR_RNDN);
  return r;
}

namespace {

std::string render_scaled(const BigInt& scaled, int digits) {
  BigInt a = abs(scaled);
  std::string s = a.get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) - s.size() + 1, '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  return (sgn(scaled) < 0 ? "-" : "") + s;
}

BigInt ten_to(int digits) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return p;
}

}  // namespace

std::string decimal_down(const Rational& x, int digits) {
  Rational scaled = x * ten_to(digits);
  return render_scaled(floor(scaled), digits);
}

std::string decimal_up(const Rational& x, int digits) {
  Rational scaled = x * ten_to(digits);
  return render_scaled(-floor(Rational(-scaled)), digits);
}

int digits_for_width(const Rational& width) {
  if (sgn(width) <= 0) return 40;
  int d = 0;
  Rational w = width;
  while (w < 1 && d < 400) {
    w *= 10;
    ++d;
  }
  return d + 1;
}

}  // namespace multifrac

#include "solomon/money.hpp"

#include <cctype>
#include <ostream>

namespace solomon {
namespace {

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Money::Money(long num, long den) : value_(num, den) {
  if (den == 0) throw MoneyParseError("money: zero denominator");
  value_.canonicalize();
}

Money Money::parse(std::string_view text) {
  // Trim surrounding whitespace; everything else must be part of the number.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw MoneyParseError("money: empty string");

  const std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw MoneyParseError("money: malformed fraction '" + s + "'");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw MoneyParseError("money: malformed fraction '" + s + "'");
    if (q.get_den() == 0) throw MoneyParseError("money: zero denominator in '" + s + "'");
    q.canonicalize();
    return Money(std::move(q));
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string intpart = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    bool negative = false;
    if (!intpart.empty() && (intpart.front() == '+' || intpart.front() == '-')) {
      negative = intpart.front() == '-';
      intpart.erase(intpart.begin());
    }
    if (intpart.empty() && frac.empty()) throw MoneyParseError("money: malformed decimal '" + s + "'");
    for (char c : intpart + frac)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw MoneyParseError("money: malformed decimal '" + s + "'");
    mpz_class scaled(intpart.empty() ? std::string("0") : intpart);
    for (char c : frac) {
      scaled *= 10;
      scaled += c - '0';
    }
    mpz_class den(1);
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    mpq_class q(scaled, den);
    q.canonicalize();
    if (negative) q = -q;
    return Money(std::move(q));
  }
  if (!is_integer_token(s)) throw MoneyParseError("money: malformed number '" + s + "'");
  return Money(mpq_class(mpz_class(s)));
}

std::string Money::to_string() const {
  const mpz_class& num = value_.get_num();
  const mpz_class& den = value_.get_den();
  if (den == 1) return num.get_str();

  // Finite decimal expansion exists iff den = 2^a * 5^b.
  mpz_class d = den;
  int twos = 0, fives = 0;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) {
    d /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return num.get_str() + "/" + den.get_str();

  const int digits = std::max(twos, fives);
  mpz_class scale(1);
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class scaled = num * scale / den;  // exact by construction
  const bool negative = scaled < 0;
  std::string body = mpz_class(abs(scaled)).get_str();
  if (static_cast<int>(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
  body.insert(body.size() - digits, ".");
  return (negative ? "-" : "") + body;
}

Money Money::operator-() const { return Money(mpq_class(-value_)); }

Money& Money::operator+=(const Money& rhs) {
  value_ += rhs.value_;
  return *this;
}

Money& Money::operator-=(const Money& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Money& Money::operator*=(const Money& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Money& Money::operator/=(const Money& rhs) {
  if (rhs.is_zero()) throw std::domain_error("money: division by zero");
  value_ /= rhs.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Money& m) { return os << m.to_string(); }

}  // namespace solomon

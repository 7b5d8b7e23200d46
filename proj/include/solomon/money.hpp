#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace solomon {

/// Raised when a money string cannot be parsed.
class MoneyParseError : public std::runtime_error {
 public:
  explicit MoneyParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact rational amount of currency. Every payoff-relevant quantity in the
/// engine (valuations, bids, fees, transfers, payoffs) is a Money value; there
/// is no floating-point representation anywhere.
///
/// Accepted string forms: integer ("10", "-3"), decimal ("3.5", "-0.25"),
/// fraction ("7/2", "-1/3"). to_string() renders integers as integers,
/// rationals with a finite decimal expansion as exact decimals, and everything
/// else as "p/q" in lowest terms.
class Money {
 public:
  Money() : value_(0) {}
  Money(long n) : value_(n) {}            // NOLINT(google-explicit-constructor)
  Money(int n) : value_(n) {}             // NOLINT(google-explicit-constructor)
  Money(long num, long den);

  static Money parse(std::string_view text);

  std::string to_string() const;

  Money operator-() const;
  Money& operator+=(const Money& rhs);
  Money& operator-=(const Money& rhs);
  Money& operator*=(const Money& rhs);
  Money& operator/=(const Money& rhs);

  friend Money operator+(Money lhs, const Money& rhs) { return lhs += rhs; }
  friend Money operator-(Money lhs, const Money& rhs) { return lhs -= rhs; }
  friend Money operator*(Money lhs, const Money& rhs) { return lhs *= rhs; }
  friend Money operator/(Money lhs, const Money& rhs) { return lhs /= rhs; }

  friend bool operator==(const Money& lhs, const Money& rhs) {
    return mpq_equal(lhs.value_.get_mpq_t(), rhs.value_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Money& lhs, const Money& rhs) {
    const int c = mpq_cmp(lhs.value_.get_mpq_t(), rhs.value_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_negative() const { return sgn(value_) < 0; }
  bool is_positive() const { return sgn(value_) > 0; }

 private:
  explicit Money(mpq_class v) : value_(std::move(v)) {}
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Money& m);

}  // namespace solomon

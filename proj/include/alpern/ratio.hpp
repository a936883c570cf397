#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace alpern {

// Exact rational number in canonical form (gcd(num, den) = 1, den > 0).
// Backed by GMP so that sums over large column systems never overflow.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Ratio(std::int64_t num, std::int64_t den);
  explicit Ratio(mpq_class value);

  // Accepts "p/q" or "p" (optionally signed); throws alpern::Error(Syntax).
  static Ratio parse(std::string_view text);

  // Always "p/q", integers render as "p/1".
  std::string str() const;

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  // Largest integer <= value / smallest integer >= value.
  mpz_class floor() const;
  mpz_class ceil() const;

  Ratio& operator+=(const Ratio& o);
  Ratio& operator-=(const Ratio& o);
  Ratio& operator*=(const Ratio& o);
  Ratio& operator/=(const Ratio& o);

  friend Ratio operator+(Ratio a, const Ratio& b) { return a += b; }
  friend Ratio operator-(Ratio a, const Ratio& b) { return a -= b; }
  friend Ratio operator*(Ratio a, const Ratio& b) { return a *= b; }
  friend Ratio operator/(Ratio a, const Ratio& b) { return a /= b; }
  friend Ratio operator-(const Ratio& a) { return Ratio(mpq_class(-a.value_)); }

  friend bool operator==(const Ratio& a, const Ratio& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Ratio& r);

// lcm of denominators; used to size grids.
mpz_class lcm(const mpz_class& a, const mpz_class& b);

// Converts an mpz that is known to fit into int64; throws alpern::Error otherwise.
std::int64_t to_int64(const mpz_class& z);

}  // namespace alpern

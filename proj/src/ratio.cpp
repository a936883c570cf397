#include "alpern/ratio.hpp"

#include <limits>
#include <ostream>

#include "alpern/error.hpp"

namespace alpern {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Ratio::Ratio(std::int64_t value) : value_(mpz_class(static_cast<long>(value))) {}

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  value_.canonicalize();
}

Ratio::Ratio(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Ratio Ratio::parse(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!valid_integer(num_text)) {
    throw Error(ErrorCode::Syntax, "malformed rational '" + std::string(text) + "'");
  }
  mpz_class den = 1;
  if (slash != std::string_view::npos) {
    const auto den_text = text.substr(slash + 1);
    if (!valid_integer(den_text) || den_text[0] == '-') {
      throw Error(ErrorCode::Syntax, "malformed rational '" + std::string(text) + "'");
    }
    den = parse_integer(den_text);
    if (den == 0) throw Error(ErrorCode::Syntax, "zero denominator in '" + std::string(text) + "'");
  }
  return Ratio(mpq_class(parse_integer(num_text), den));
}

std::string Ratio::str() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

mpz_class Ratio::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

mpz_class Ratio::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

Ratio& Ratio::operator+=(const Ratio& o) {
  value_ += o.value_;
  return *this;
}
Ratio& Ratio::operator-=(const Ratio& o) {
  value_ -= o.value_;
  return *this;
}
Ratio& Ratio::operator*=(const Ratio& o) {
  value_ *= o.value_;
  return *this;
}
Ratio& Ratio::operator/=(const Ratio& o) {
  if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
  value_ /= o.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }

mpz_class lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw Error(ErrorCode::Overflow, "integer " + z.get_str() + " exceeds 64 bits");
  return z.get_si();
}

}  // namespace alpern

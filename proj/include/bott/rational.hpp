#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace bott {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (GMP canonical form).
using Rational = mpq_class;
using Integer = mpz_class;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw Error("malformed rational: '" + text + "'");
  if (q.get_den() == 0) throw Error("rational with zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

}  // namespace bott

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "riesz/rational.hpp"

namespace riesz {

// Formal product of prime powers with exponents in {1, 2, ...} u {infinity},
// plus a dedicated "universal" value standing for the product of every prime
// to the infinite power. The empty product is 1.
//
// Only finitely many primes are ever stored; a value is infinite exactly when
// it is universal or some stored exponent is infinite.
class Supernatural {
 public:
  static constexpr std::int64_t kInf = -1;

  Supernatural() = default;  // the number 1

  static Supernatural universal();
  // factors: prime -> exponent (>= 1, or kInf). Primality of each key is
  // verified; throws error(errc::parse) on bad input.
  static Supernatural from_factors(const std::map<Int, std::int64_t>& factors);
  // Trial division. Factors of n beyond the 10^6 trial bound are accepted
  // only when the remaining cofactor is itself prime (certain below 10^12);
  // otherwise throws error(errc::factorization_limit).
  static Supernatural from_integer(const Int& n);
  static Supernatural prime_power(const Int& p, std::int64_t exponent);

  bool is_universal() const { return universal_; }
  bool is_one() const { return !universal_ && factors_.empty(); }
  bool is_infinite() const;
  const std::map<Int, std::int64_t>& factors() const { return factors_; }

  // Defined only for finite values: the plain integer this formal product is.
  Int finite_value() const;

  // Exponent of p in this number (0 if absent, kInf if infinite).
  std::int64_t exponent_of(const Int& p) const;

  // Formal product: exponents add, infinity absorbs.
  friend Supernatural operator*(const Supernatural& a, const Supernatural& b);
  friend bool operator==(const Supernatural& a, const Supernatural& b);

  std::string str() const;

 private:
  bool universal_ = false;
  std::map<Int, std::int64_t> factors_;
};

// Does the positive integer q divide the formal product n?
bool divides(const Int& q, const Supernatural& n);

// Disjoint prime supports. The universal number shares every prime, so it is
// relatively prime only to 1.
bool relatively_prime(const Supernatural& p, const Supernatural& q);

// Is r an element of D_n = { p/q in lowest terms : q divides n }?
bool dn_contains(const Rat& r, const Supernatural& n);

// Largest divisor d of x with divides(d, n); x >= 1. Needs no factorization
// bound: only the primes stored in n are probed (for universal n it is x).
Int compatible_part(const Int& x, const Supernatural& n);

// Some divisor of n that is >= at_least, built greedily from n's primes (a
// power of 2 when n is universal); nullopt when every divisor falls short,
// which can only happen for finite n.
std::optional<Int> dense_divisor(const Supernatural& n, const Int& at_least);

// A rational in D_n with modulus n.
struct LocalizedRational {
  Rat value;
  Supernatural modulus;

  // Throws error(errc::precondition) if value is not in D_modulus.
  LocalizedRational(Rat v, Supernatural m);
};

}  // namespace riesz

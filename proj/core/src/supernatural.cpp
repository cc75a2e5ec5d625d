#include "riesz/supernatural.hpp"

#include <sstream>

#include "riesz/error.hpp"

namespace riesz {

namespace {

constexpr long kTrialBound = 1000000;

bool is_prime(const Int& p) {
  // 2 = definitely prime, 1 = probably (no composite below 2^64 passes 40
  // rounds, and our inputs are far smaller than that bound matters for).
  return mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

}  // namespace

Supernatural Supernatural::universal() {
  Supernatural s;
  s.universal_ = true;
  return s;
}

Supernatural Supernatural::from_factors(const std::map<Int, std::int64_t>& factors) {
  Supernatural s;
  for (const auto& [p, e] : factors) {
    if (p < 2 || !is_prime(p)) fail(errc::parse, "not a prime: " + p.get_str());
    if (e != kInf && e < 1) fail(errc::parse, "exponent must be positive or infinite");
    s.factors_[p] = e;
  }
  return s;
}

Supernatural Supernatural::from_integer(const Int& n) {
  if (n < 1) fail(errc::parse, "supernatural number must come from a positive integer");
  Supernatural s;
  Int rest = n;
  for (long d = 2; d <= kTrialBound && rest > 1; d = (d == 2 ? 3 : d + 2)) {
    if (Int(d) * d > rest) break;
    std::int64_t e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
      ++e;
    }
    if (e > 0) s.factors_[Int(d)] = e;
  }
  if (rest > 1) {
    if (!is_prime(rest)) {
      fail(errc::factorization_limit,
           "cofactor " + rest.get_str() + " exceeds the trial division bound and is not prime");
    }
    s.factors_[rest] += 1;
  }
  return s;
}

Supernatural Supernatural::prime_power(const Int& p, std::int64_t exponent) {
  return from_factors({{p, exponent}});
}

bool Supernatural::is_infinite() const {
  if (universal_) return true;
  for (const auto& [p, e] : factors_) {
    (void)p;
    if (e == kInf) return true;
  }
  return false;
}

Int Supernatural::finite_value() const {
  if (is_infinite()) fail(errc::precondition, "finite_value on an infinite supernatural number");
  Int v = 1;
  for (const auto& [p, e] : factors_) {
    for (std::int64_t i = 0; i < e; ++i) v *= p;
  }
  return v;
}

std::int64_t Supernatural::exponent_of(const Int& p) const {
  if (universal_) return kInf;
  auto it = factors_.find(p);
  return it == factors_.end() ? 0 : it->second;
}

Supernatural operator*(const Supernatural& a, const Supernatural& b) {
  if (a.universal_ || b.universal_) return Supernatural::universal();
  Supernatural s = a;
  for (const auto& [p, e] : b.factors_) {
    auto it = s.factors_.find(p);
    if (it == s.factors_.end()) {
      s.factors_[p] = e;
    } else if (it->second == Supernatural::kInf || e == Supernatural::kInf) {
      it->second = Supernatural::kInf;
    } else {
      it->second += e;
    }
  }
  return s;
}

bool operator==(const Supernatural& a, const Supernatural& b) {
  return a.universal_ == b.universal_ && a.factors_ == b.factors_;
}

std::string Supernatural::str() const {
  if (universal_) return "universal";
  if (factors_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, e] : factors_) {
    if (!first) os << "*";
    first = false;
    os << p.get_str();
    if (e == kInf) {
      os << "^inf";
    } else if (e != 1) {
      os << "^" << e;
    }
  }
  return os.str();
}

bool divides(const Int& q, const Supernatural& n) {
  if (q < 1) fail(errc::precondition, "divides expects a positive integer");
  if (n.is_universal()) return true;
  // Strip each stored prime as far as its exponent allows; q divides n
  // exactly when nothing is left. No factorization of q is needed.
  Int rest = q;
  for (const auto& [p, e] : n.factors()) {
    std::int64_t taken = 0;
    while ((e == Supernatural::kInf || taken < e) &&
           mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
      ++taken;
    }
    if (rest == 1) break;
  }
  return rest == 1;
}

bool relatively_prime(const Supernatural& p, const Supernatural& q) {
  if (p.is_universal()) return q.is_one();
  if (q.is_universal()) return p.is_one();
  for (const auto& [prime, e] : p.factors()) {
    (void)e;
    if (q.exponent_of(prime) != 0) return false;
  }
  return true;
}

bool dn_contains(const Rat& r, const Supernatural& n) { return divides(r.get_den(), n); }

Int compatible_part(const Int& x, const Supernatural& n) {
  if (x < 1) fail(errc::precondition, "compatible_part expects a positive integer");
  if (n.is_universal()) return x;
  Int d = 1;
  for (const auto& [p, e] : n.factors()) {
    Int rest = x;
    std::int64_t taken = 0;
    while ((e == Supernatural::kInf || taken < e) &&
           mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
      d *= p;
      ++taken;
    }
  }
  return d;
}

std::optional<Int> dense_divisor(const Supernatural& n, const Int& at_least) {
  if (at_least <= 1) return Int(1);
  if (n.is_universal()) {
    Int d = 1;
    while (d < at_least) d *= 2;
    return d;
  }
  Int d = 1;
  for (const auto& [p, e] : n.factors()) {
    std::int64_t taken = 0;
    while (d < at_least && (e == Supernatural::kInf || taken < e)) {
      d *= p;
      ++taken;
    }
    if (d >= at_least) return d;
  }
  return std::nullopt;
}

LocalizedRational::LocalizedRational(Rat v, Supernatural m)
    : value(std::move(v)), modulus(std::move(m)) {
  if (!dn_contains(value, modulus)) {
    fail(errc::precondition,
         "denominator of " + to_string(value) + " does not divide " + modulus.str());
  }
}

}  // namespace riesz

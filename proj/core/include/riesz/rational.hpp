#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace riesz {

using Int = mpz_class;
using Rat = mpq_class;

// Parsing accepts "p", "-p", "p/q" with q != 0; the result is canonical
// (reduced, denominator positive). Throws error(errc::parse) otherwise.
Int int_from_string(const std::string& s);
Rat rat_from_string(const std::string& s);

// "p/q" for non-integers, plain "p" when the denominator is 1.
std::string to_string(const Rat& r);
std::string to_string(const Int& z);

std::vector<Rat> rat_vector_from_strings(const std::vector<std::string>& ss);
std::vector<std::string> rat_vector_to_strings(const std::vector<Rat>& v);

inline Int num(const Rat& r) { return r.get_num(); }
inline Int den(const Rat& r) { return r.get_den(); }

inline int sign(const Rat& r) { return sgn(r); }
inline int sign(const Int& z) { return sgn(z); }

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

// Largest integer <= r, smallest integer >= r, and nearest (ties toward zero).
Int floor_div(const Int& a, const Int& b);
Int floor_rat(const Rat& r);
Int ceil_rat(const Rat& r);
Int round_rat(const Rat& r);

// Nearest multiple of 1/denom to r (ties toward zero).
Rat round_to_denominator(const Rat& r, const Int& denom);

Rat abs(const Rat& r);

double to_double(const Rat& r);

}  // namespace riesz

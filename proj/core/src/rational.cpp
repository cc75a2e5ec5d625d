#include "riesz/rational.hpp"

#include <cctype>

#include "riesz/error.hpp"

namespace riesz {

namespace {

bool valid_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Int int_from_string(const std::string& s) {
  if (!valid_integer_token(s)) fail(errc::parse, "not an integer: '" + s + "'");
  return Int(s);
}

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(int_from_string(s));
  Int p = int_from_string(s.substr(0, slash));
  Int q = int_from_string(s.substr(slash + 1));
  if (q == 0) fail(errc::parse, "zero denominator: '" + s + "'");
  Rat r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }
std::string to_string(const Int& z) { return z.get_str(); }

std::vector<Rat> rat_vector_from_strings(const std::vector<std::string>& ss) {
  std::vector<Rat> out;
  out.reserve(ss.size());
  for (const auto& s : ss) out.push_back(rat_from_string(s));
  return out;
}

std::vector<std::string> rat_vector_to_strings(const std::vector<Rat>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int floor_rat(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }

Int ceil_rat(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

Int round_rat(const Rat& r) {
  Rat shifted = r + Rat(1, 2);
  Int f = floor_rat(shifted);
  if (shifted == Rat(f) && sgn(r) > 0) return f - 1;  // exact halves go toward zero
  return f;
}

Rat round_to_denominator(const Rat& r, const Int& denom) {
  Rat scaled = r * Rat(denom);
  Rat out(round_rat(scaled), denom);
  out.canonicalize();
  return out;
}

Rat abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

double to_double(const Rat& r) { return r.get_d(); }

}  // namespace riesz

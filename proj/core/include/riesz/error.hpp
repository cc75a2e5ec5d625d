#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

enum class errc {
  parse,
  dimension_mismatch,
  factorization_limit,
  incompatible_moduli,
  not_a_subgroup,
  precondition,
  not_semi_bounded,
  beta_outside_bundle,
  support_overlap,
  insufficient_density,
  inconsistent,
  unsupported,
};

// Single exception type for all contract violations; `code` identifies the
// failed precondition so callers (and the CLI) can map it to a diagnostic
// without string matching.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parse: return "parse";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::factorization_limit: return "factorization_limit";
    case errc::incompatible_moduli: return "incompatible_moduli";
    case errc::not_a_subgroup: return "not_a_subgroup";
    case errc::precondition: return "precondition";
    case errc::not_semi_bounded: return "not_semi_bounded";
    case errc::beta_outside_bundle: return "beta_outside_bundle";
    case errc::support_overlap: return "support_overlap";
    case errc::insufficient_density: return "insufficient_density";
    case errc::inconsistent: return "inconsistent";
    case errc::unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace riesz

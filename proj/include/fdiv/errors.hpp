#pragma once

#include <stdexcept>
#include <string>

namespace fdv {

// Every library failure carries a short machine-readable code. Validation
// errors (bad input, violated preconditions) map to CLI exit status 1,
// everything else to 2.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg, bool validation)
      : std::runtime_error(msg), code_(std::move(code)), validation_(validation) {}
  const std::string& code() const noexcept { return code_; }
  bool validation() const noexcept { return validation_; }

 private:
  std::string code_;
  bool validation_;
};

#define FDIV_DEFINE_ERROR(Name, code_str, is_validation)        \
  struct Name : Error {                                         \
    explicit Name(const std::string& msg)                       \
        : Error(code_str, msg, is_validation) {}                \
  };

FDIV_DEFINE_ERROR(PreconditionError, "precondition", true)
FDIV_DEFINE_ERROR(DomainError, "domain", true)
FDIV_DEFINE_ERROR(DataError, "data", true)
FDIV_DEFINE_ERROR(UnsupportedKind, "unsupported_kind", true)
FDIV_DEFINE_ERROR(UnboundedTruncation, "unbounded_truncation", false)
FDIV_DEFINE_ERROR(DegenerateTruncation, "degenerate_truncation", false)
FDIV_DEFINE_ERROR(GrowthConditionError, "growth_condition", false)
FDIV_DEFINE_ERROR(SizeError, "size", false)
FDIV_DEFINE_ERROR(InvariantViolation, "invariant", false)
FDIV_DEFINE_ERROR(SmoothnessError, "smoothness", false)

#undef FDIV_DEFINE_ERROR

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace fdv

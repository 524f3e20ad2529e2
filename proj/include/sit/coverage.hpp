#ifndef SIT_COVERAGE_HPP
#define SIT_COVERAGE_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sit/core.hpp"
#include "sit/diagnostics.hpp"
#include "sit/evaluator.hpp"

namespace sit {

/// Constructors that must be handled at an instantiation, in declaration
/// order.
struct Available {
  std::vector<std::string> ctors;
};
/// Matching the indices against `ctor`'s row got stuck at `position`.
struct Undecidable {
  std::string ctor;
  std::size_t position;
};
using Availability = std::variant<Available, Undecidable>;

/// Throws TypeError (unknown head) for an undeclared data type.
Availability available_ctors(Evaluator& eval, const std::string& data,
                             std::span<const Term> indices);

/// Field telescope of `ctor` at the given indices with fresh binder names,
/// or nullopt when the constructor is not available there.
std::optional<Telescope> instantiate_fields(Evaluator& eval, const std::string& ctor,
                                            std::span<const Term> indices);

struct CoverageReport {
  std::size_t leaves = 0;
  std::vector<std::size_t> unreachable;
  std::vector<Diagnostic> warnings;
};

/// Case-splitting exhaustiveness check for a function whose clauses have
/// already been checked. Throws TypeError for a missing case or when a
/// required split cannot be decided; unreachable clauses are warnings.
CoverageReport check_coverage(Evaluator& eval, const FuncDecl& f);

}  // namespace sit

#endif  // SIT_COVERAGE_HPP

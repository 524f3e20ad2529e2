#ifndef SIT_PATTERN_OPS_HPP
#define SIT_PATTERN_OPS_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sit/core.hpp"

namespace sit {

struct Matched {
  Substitution subst;
};
struct Mismatch {};
/// Matching needs a constructor where the term has a neutral or non-data
/// head. `position` indexes the top-level term list.
struct Stuck {
  std::size_t position;
};

using MatchOutcome = std::variant<Matched, Mismatch, Stuck>;

std::vector<Var> vars_tele(const Telescope& tele);

/// Bindings of checked patterns, depth first, left to right.
Telescope vars_pats(std::span<const Pattern> ps);

/// The term matching exactly the pattern. Throws InternalError on
/// `impossible`.
Term to_term(const Pattern& p);
std::vector<Term> to_terms(std::span<const Pattern> ps);

/// Syntactic matching on weak-head normal forms; never reduces.
///
/// A Mismatch anywhere in the list wins over a Stuck elsewhere. An
/// `impossible` pattern matches nothing.
MatchOutcome match_terms(std::span<const Term> us, std::span<const Pattern> ps);

std::string to_string(const MatchOutcome& m);

}  // namespace sit

#endif  // SIT_PATTERN_OPS_HPP

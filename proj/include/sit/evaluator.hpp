#ifndef SIT_EVALUATOR_HPP
#define SIT_EVALUATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sit/core.hpp"
#include "sit/pattern_ops.hpp"

namespace sit {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

struct EvalOptions {
  std::uint64_t fuel = kDefaultFuel;
  /// When set, every match performed by the evaluator is logged here.
  std::ostream* trace = nullptr;
};

/// Outcome of first-match clause selection for a function call.
struct Dispatch {
  enum class Kind { Selected, Stuck, FellThrough };
  Kind kind = Kind::FellThrough;
  std::size_t clause = 0;  // valid when Selected
  Substitution subst;      // valid when Selected
  std::vector<Term> args;  // arguments after forcing
};

/// Reduction over a signature. Holds a reference to the signature, which
/// may keep growing while declarations are checked, and a step budget.
/// Not thread-safe: the step counter is per instance.
class Evaluator {
 public:
  explicit Evaluator(const Signature& sig, EvalOptions opts = {});

  const Signature& signature() const { return sig_; }

  Term whnf(const Term& u);
  Term normalize(const Term& u);
  /// Normal forms equal up to renaming, with lambda eta.
  bool convertible(const Term& a, const Term& b);

  /// Reduces `u` exactly as far as matching against `p` inspects it.
  Term force(const Term& u, const Pattern& p);
  std::vector<Term> force(std::span<const Term> us, std::span<const Pattern> ps);
  /// Forces, then matches; traced when tracing is on.
  MatchOutcome match(std::span<const Term> us, std::span<const Pattern> ps);

  /// Top-to-bottom clause selection. A Stuck row before any Matched row
  /// freezes the call.
  Dispatch dispatch(const FuncDecl& f, std::span<const Term> args);

  std::uint64_t steps_used() const { return used_; }

 private:
  void tick();
  bool conv(const Term& a, const Term& b, std::vector<std::pair<std::uint64_t, std::uint64_t>>& env);

  const Signature& sig_;
  EvalOptions opts_;
  std::uint64_t used_ = 0;
};

}  // namespace sit

#endif  // SIT_EVALUATOR_HPP

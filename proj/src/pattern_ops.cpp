#include "sit/pattern_ops.hpp"

namespace sit {

namespace {

void collect_bindings(const Pattern& p, Telescope& out) {
  if (const auto* b = p.as<BindPat>()) {
    if (!b->type) throw InternalError("vars_pats: binding " + b->var.name + " has no type yet");
    out.push_back(Binding{b->var, *b->type});
  } else if (const auto* c = p.as<ConPat>()) {
    for (const auto& a : c->args) collect_bindings(a, out);
  }
}

// Result for one term/pattern pair, before positions are attached.
enum class Local { Ok, No, Blocked };

Local match_one(const Term& u, const Pattern& p, Substitution& acc) {
  if (const auto* b = p.as<BindPat>()) {
    acc = disjoint_union(acc, Substitution{{{b->var, u}}});
    return Local::Ok;
  }
  if (p.is<ImpossiblePat>()) return Local::No;
  const auto& cp = *p.as<ConPat>();
  const auto* cu = u.as<ConCall>();
  if (!cu) return Local::Blocked;
  if (cu->name != cp.name || cu->args.size() != cp.args.size()) return Local::No;
  bool blocked = false;
  for (std::size_t i = 0; i < cp.args.size(); ++i) {
    switch (match_one(cu->args[i], cp.args[i], acc)) {
      case Local::No:
        return Local::No;
      case Local::Blocked:
        blocked = true;
        break;
      case Local::Ok:
        break;
    }
  }
  return blocked ? Local::Blocked : Local::Ok;
}

}  // namespace

std::vector<Var> vars_tele(const Telescope& tele) {
  std::vector<Var> out;
  out.reserve(tele.size());
  for (const auto& b : tele) out.push_back(b.var);
  return out;
}

Telescope vars_pats(std::span<const Pattern> ps) {
  Telescope out;
  for (const auto& p : ps) collect_bindings(p, out);
  return out;
}

Term to_term(const Pattern& p) {
  if (const auto* b = p.as<BindPat>()) return var_call(b->var);
  if (const auto* c = p.as<ConPat>()) return con_call(c->name, to_terms(c->args));
  throw InternalError("to_term: pattern contains impossible");
}

std::vector<Term> to_terms(std::span<const Pattern> ps) {
  std::vector<Term> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(to_term(p));
  return out;
}

MatchOutcome match_terms(std::span<const Term> us, std::span<const Pattern> ps) {
  if (us.size() != ps.size())
    throw InternalError("match_terms: " + std::to_string(us.size()) + " terms against " +
                        std::to_string(ps.size()) + " patterns");
  Substitution acc;
  std::optional<std::size_t> stuck_at;
  for (std::size_t i = 0; i < us.size(); ++i) {
    switch (match_one(us[i], ps[i], acc)) {
      case Local::No:
        return Mismatch{};
      case Local::Blocked:
        if (!stuck_at) stuck_at = i;
        break;
      case Local::Ok:
        break;
    }
  }
  if (stuck_at) return Stuck{*stuck_at};
  return Matched{std::move(acc)};
}

std::string to_string(const MatchOutcome& m) {
  if (const auto* ok = std::get_if<Matched>(&m)) return "Matched" + to_string(ok->subst);
  if (std::holds_alternative<Mismatch>(m)) return "Mismatch";
  return "Stuck(" + std::to_string(std::get<Stuck>(m).position) + ")";
}

}  // namespace sit

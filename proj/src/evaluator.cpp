#include "sit/evaluator.hpp"

#include <ostream>

namespace sit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Renaming = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

bool same_var(const Var& a, const Var& b, const Renaming& env) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == a.id || it->second == b.id) return it->first == a.id && it->second == b.id;
  return a.id == b.id;
}

}  // namespace

Evaluator::Evaluator(const Signature& sig, EvalOptions opts) : sig_(sig), opts_(opts) {}

void Evaluator::tick() {
  if (++used_ > opts_.fuel) {
    Diagnostic d;
    d.code = std::string(codes::kFuelExhausted);
    d.message = "reduction step limit of " + std::to_string(opts_.fuel) + " exhausted";
    throw FuelExhausted(std::move(d));
  }
}

Term Evaluator::force(const Term& u, const Pattern& p) {
  const auto* cp = p.as<ConPat>();
  if (!cp) return u;
  Term w = whnf(u);
  const auto* c = w.as<ConCall>();
  if (!c || c->name != cp->name || c->args.size() != cp->args.size()) return w;
  std::vector<Term> args;
  args.reserve(c->args.size());
  bool changed = false;
  for (std::size_t i = 0; i < c->args.size(); ++i) {
    args.push_back(force(c->args[i], cp->args[i]));
    changed = changed || !args.back().same_node(c->args[i]);
  }
  return changed ? con_call(c->name, std::move(args)) : w;
}

std::vector<Term> Evaluator::force(std::span<const Term> us, std::span<const Pattern> ps) {
  std::vector<Term> out;
  out.reserve(us.size());
  for (std::size_t i = 0; i < us.size(); ++i)
    out.push_back(i < ps.size() ? force(us[i], ps[i]) : us[i]);
  return out;
}

MatchOutcome Evaluator::match(std::span<const Term> us, std::span<const Pattern> ps) {
  const auto forced = force(us, ps);
  auto outcome = match_terms(forced, ps);
  if (opts_.trace)
    *opts_.trace << "match [" << to_string(std::span<const Term>(forced)) << "] against ["
                 << to_string(ps) << "] => " << to_string(outcome) << '\n';
  return outcome;
}

Dispatch Evaluator::dispatch(const FuncDecl& f, std::span<const Term> args) {
  Dispatch out;
  out.args.assign(args.begin(), args.end());
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& cl = f.clauses[i];
    if (cl.patterns.size() != out.args.size()) continue;
    // Forcing only ever reduces, so forced arguments are reused by later rows.
    out.args = force(out.args, cl.patterns);
    auto outcome = match_terms(out.args, cl.patterns);
    if (opts_.trace)
      *opts_.trace << "match [" << to_string(std::span<const Term>(out.args)) << "] against ["
                   << to_string(cl.patterns) << "] => " << to_string(outcome) << '\n';
    if (auto* m = std::get_if<Matched>(&outcome)) {
      if (!cl.body) continue;
      out.kind = Dispatch::Kind::Selected;
      out.clause = i;
      out.subst = std::move(m->subst);
      return out;
    }
    if (std::holds_alternative<Stuck>(outcome)) {
      out.kind = Dispatch::Kind::Stuck;
      return out;
    }
  }
  out.kind = Dispatch::Kind::FellThrough;
  return out;
}

Term Evaluator::whnf(const Term& u) {
  Term cur = u;
  for (;;) {
    if (const auto* a = cur.as<App>()) {
      Term head = whnf(a->head);
      if (const auto* l = head.as<Lam>()) {
        tick();
        Term body = subst(l->body, l->binder, a->args.front());
        cur = sit::apply(body, std::vector<Term>(a->args.begin() + 1, a->args.end()));
        continue;
      }
      if (head.same_node(a->head)) return cur;
      return sit::apply(head, a->args);
    }
    if (const auto* f = cur.as<FnCall>()) {
      const FuncDecl* decl = sig_.find_func(f->name);
      if (!decl) return cur;
      auto d = dispatch(*decl, f->args);
      if (d.kind != Dispatch::Kind::Selected) return fn_call(f->name, std::move(d.args));
      tick();
      cur = subst(*decl->clauses[d.clause].body, d.subst);
      continue;
    }
    return cur;
  }
}

Term Evaluator::normalize(const Term& u) {
  Term w = whnf(u);
  auto all = [&](const std::vector<Term>& xs) {
    std::vector<Term> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(normalize(x));
    return out;
  };
  return std::visit(overloaded{
                        [&](const FnCall& f) { return fn_call(f.name, all(f.args)); },
                        [&](const VarCall& v) { return var_call(v.var, all(v.args)); },
                        [&](const DataCall& d) { return data_call(d.name, all(d.args)); },
                        [&](const ConCall& c) { return con_call(c.name, all(c.args)); },
                        [&](const Pi& p) {
                          return pi(p.binder, normalize(p.domain), normalize(p.codomain));
                        },
                        [&](const Lam& l) { return lam(l.binder, normalize(l.body)); },
                        [&](const Univ&) { return w; },
                        [&](const App& a) {
                          return sit::apply(normalize(a.head), all(a.args));
                        },
                    },
                    w.node().value);
}

bool Evaluator::convertible(const Term& a, const Term& b) {
  if (alpha_equal(a, b)) return true;
  Renaming env;
  return conv(normalize(a), normalize(b), env);
}

bool Evaluator::conv(const Term& a, const Term& b, Renaming& env) {
  const auto* la = a.as<Lam>();
  const auto* lb = b.as<Lam>();
  if (la && lb) {
    env.emplace_back(la->binder.id, lb->binder.id);
    const bool ok = conv(la->body, lb->body, env);
    env.pop_back();
    return ok;
  }
  // Eta: a normal non-lambda t is compared as fn x => t x.
  if (la || lb) {
    const Lam& l = la ? *la : *lb;
    const Term& other = la ? b : a;
    Term expanded = sit::apply(other, {var_call(l.binder)});
    env.emplace_back(l.binder.id, l.binder.id);
    const bool ok = la ? conv(l.body, expanded, env) : conv(expanded, l.body, env);
    env.pop_back();
    return ok;
  }
  if (a.node().value.index() != b.node().value.index()) return false;
  auto all = [&](const std::vector<Term>& xs, const std::vector<Term>& ys) {
    if (xs.size() != ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!conv(xs[i], ys[i], env)) return false;
    return true;
  };
  return std::visit(
      overloaded{
          [&](const FnCall& x) {
            const auto& y = *b.as<FnCall>();
            return x.name == y.name && all(x.args, y.args);
          },
          [&](const VarCall& x) {
            const auto& y = *b.as<VarCall>();
            return same_var(x.var, y.var, env) && all(x.args, y.args);
          },
          [&](const DataCall& x) {
            const auto& y = *b.as<DataCall>();
            return x.name == y.name && all(x.args, y.args);
          },
          [&](const ConCall& x) {
            const auto& y = *b.as<ConCall>();
            return x.name == y.name && all(x.args, y.args);
          },
          [&](const Pi& x) {
            const auto& y = *b.as<Pi>();
            if (!conv(x.domain, y.domain, env)) return false;
            env.emplace_back(x.binder.id, y.binder.id);
            const bool ok = conv(x.codomain, y.codomain, env);
            env.pop_back();
            return ok;
          },
          [](const Lam&) { return false; },
          [](const Univ&) { return true; },
          [&](const App& x) {
            const auto& y = *b.as<App>();
            return conv(x.head, y.head, env) && all(x.args, y.args);
          },
      },
      a.node().value);
}

}  // namespace sit

#include "sit/core.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace sit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::atomic<std::uint64_t> g_next_var_id{1};

std::uint64_t bit_of(std::uint64_t id) { return std::uint64_t{1} << (id % 64); }

std::uint64_t mask_of(const std::vector<Term>& ts) {
  std::uint64_t m = 0;
  for (const auto& t : ts) m |= t.var_mask();
  return m;
}

std::uint64_t compute_mask(const TermNode& n) {
  return std::visit(
      overloaded{
          [](const FnCall& f) { return mask_of(f.args); },
          [](const VarCall& v) { return bit_of(v.var.id) | mask_of(v.args); },
          [](const DataCall& d) { return mask_of(d.args); },
          [](const ConCall& c) { return mask_of(c.args); },
          [](const Pi& p) {
            return bit_of(p.binder.id) | p.domain.var_mask() | p.codomain.var_mask();
          },
          [](const Lam& l) { return bit_of(l.binder.id) | l.body.var_mask(); },
          [](const Univ&) { return std::uint64_t{0}; },
          [](const App& a) { return a.head.var_mask() | mask_of(a.args); },
      },
      n.value);
}

}  // namespace

Var fresh_var(std::string name) {
  return Var{g_next_var_id.fetch_add(1, std::memory_order_relaxed), std::move(name)};
}

Term::Term(TermNode node) {
  node.mask = compute_mask(node);
  node_ = std::make_shared<const TermNode>(std::move(node));
}

std::uint64_t Term::var_mask() const { return node_->mask; }

Term fn_call(std::string name, std::vector<Term> args) {
  return Term(TermNode{FnCall{std::move(name), std::move(args)}});
}
Term var_call(Var v, std::vector<Term> args) {
  return Term(TermNode{VarCall{std::move(v), std::move(args)}});
}
Term data_call(std::string name, std::vector<Term> args) {
  return Term(TermNode{DataCall{std::move(name), std::move(args)}});
}
Term con_call(std::string name, std::vector<Term> args) {
  return Term(TermNode{ConCall{std::move(name), std::move(args)}});
}
Term pi(Var binder, Term domain, Term codomain) {
  return Term(TermNode{Pi{std::move(binder), std::move(domain), std::move(codomain)}});
}
Term lam(Var binder, Term body) { return Term(TermNode{Lam{std::move(binder), std::move(body)}}); }
Term univ() {
  static const Term u(TermNode{Univ{}});
  return u;
}

Term apply(const Term& head, std::vector<Term> args) {
  if (args.empty()) return head;
  if (const auto* v = head.as<VarCall>()) {
    std::vector<Term> all = v->args;
    all.insert(all.end(), args.begin(), args.end());
    return var_call(v->var, std::move(all));
  }
  if (const auto* a = head.as<App>()) {
    std::vector<Term> all = a->args;
    all.insert(all.end(), args.begin(), args.end());
    return Term(TermNode{App{a->head, std::move(all)}});
  }
  return Term(TermNode{App{head, std::move(args)}});
}

Pattern::Pattern(PatternNode node) : node_(std::make_shared<const PatternNode>(std::move(node))) {}

Pattern bind_pat(Var v, std::optional<Term> type) {
  return Pattern(PatternNode{BindPat{std::move(v), std::move(type)}});
}
Pattern con_pat(std::string name, std::vector<Pattern> args) {
  return Pattern(PatternNode{ConPat{std::move(name), std::move(args)}});
}
Pattern impossible_pat() { return Pattern(PatternNode{ImpossiblePat{}}); }

bool contains_impossible(const Pattern& p) {
  if (p.is<ImpossiblePat>()) return true;
  if (const auto* c = p.as<ConPat>()) return contains_impossible(c->args);
  return false;
}

bool contains_impossible(std::span<const Pattern> ps) {
  return std::any_of(ps.begin(), ps.end(), [](const Pattern& p) { return contains_impossible(p); });
}

const std::string& decl_name(const Declaration& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

const SourceSpan& decl_span(const Declaration& d) {
  return std::visit([](const auto& x) -> const SourceSpan& { return x.span; }, d);
}

// ---------------------------------------------------------------------------
// Signature

const DataDecl* Signature::find_data(const std::string& name) const {
  auto it = data_.find(name);
  return it == data_.end() ? nullptr : &std::get<DataDecl>(decls_[it->second]);
}

const FuncDecl* Signature::find_func(const std::string& name) const {
  auto it = funcs_.find(name);
  return it == funcs_.end() ? nullptr : &std::get<FuncDecl>(decls_[it->second]);
}

std::optional<Signature::CtorRef> Signature::find_ctor(const std::string& name) const {
  auto it = ctors_.find(name);
  if (it == ctors_.end()) return std::nullopt;
  const auto& data = std::get<DataDecl>(decls_[it->second.first]);
  return CtorRef{&data, &data.ctors[it->second.second], it->second.second};
}

bool Signature::contains(const std::string& name) const {
  return data_.count(name) || funcs_.count(name) || ctors_.count(name);
}

void Signature::add(Declaration decl) {
  if (contains(decl_name(decl))) throw std::logic_error("duplicate declaration " + decl_name(decl));
  decls_.push_back(std::move(decl));
  index_last();
}

void Signature::replace_last(Declaration decl) {
  if (decls_.empty() || decl_name(decls_.back()) != decl_name(decl))
    throw std::logic_error("replace_last: declaration mismatch");
  const std::size_t idx = decls_.size() - 1;
  if (const auto* old = std::get_if<DataDecl>(&decls_.back()))
    for (const auto& row : old->ctors) ctors_.erase(row.name);
  data_.erase(decl_name(decl));
  funcs_.erase(decl_name(decl));
  decls_[idx] = std::move(decl);
  index_last();
}

void Signature::index_last() {
  const std::size_t idx = decls_.size() - 1;
  if (const auto* d = std::get_if<DataDecl>(&decls_[idx])) {
    for (std::size_t i = 0; i < d->ctors.size(); ++i) {
      const auto& cname = d->ctors[i].name;
      if (contains(cname) || cname == d->name)
        throw std::logic_error("duplicate constructor " + cname);
      ctors_.emplace(cname, std::make_pair(idx, i));
    }
    data_.emplace(d->name, idx);
  } else {
    funcs_.emplace(std::get<FuncDecl>(decls_[idx]).name, idx);
  }
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_free(const Term& u, std::vector<Var>& bound, std::vector<Var>& out) {
  auto note = [&](const Var& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) != out.end()) return;
    out.push_back(v);
  };
  std::visit(overloaded{
                 [&](const FnCall& f) {
                   for (const auto& a : f.args) collect_free(a, bound, out);
                 },
                 [&](const VarCall& v) {
                   note(v.var);
                   for (const auto& a : v.args) collect_free(a, bound, out);
                 },
                 [&](const DataCall& d) {
                   for (const auto& a : d.args) collect_free(a, bound, out);
                 },
                 [&](const ConCall& c) {
                   for (const auto& a : c.args) collect_free(a, bound, out);
                 },
                 [&](const Pi& p) {
                   collect_free(p.domain, bound, out);
                   bound.push_back(p.binder);
                   collect_free(p.codomain, bound, out);
                   bound.pop_back();
                 },
                 [&](const Lam& l) {
                   bound.push_back(l.binder);
                   collect_free(l.body, bound, out);
                   bound.pop_back();
                 },
                 [](const Univ&) {},
                 [&](const App& a) {
                   collect_free(a.head, bound, out);
                   for (const auto& x : a.args) collect_free(x, bound, out);
                 },
             },
             u.node().value);
}

}  // namespace

std::vector<Var> free_vars(const Term& u) {
  std::vector<Var> bound, out;
  collect_free(u, bound, out);
  return out;
}

bool occurs_free(const Var& x, const Term& u) {
  if (!(u.var_mask() & bit_of(x.id))) return false;
  const auto fv = free_vars(u);
  return std::find(fv.begin(), fv.end(), x) != fv.end();
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

class SingleSubst {
 public:
  SingleSubst(const Var& x, const Term& v) : x_(x), v_(v), fv_(free_vars(v)) {}

  Term run(const Term& u) const {
    if (!(u.var_mask() & bit_of(x_.id))) return u;
    return std::visit(
        overloaded{
            [&](const FnCall& f) { return fn_call(f.name, args(f.args)); },
            [&](const VarCall& c) {
              auto as = args(c.args);
              if (c.var == x_) return sit::apply(v_, std::move(as));
              return var_call(c.var, std::move(as));
            },
            [&](const DataCall& d) { return data_call(d.name, args(d.args)); },
            [&](const ConCall& c) { return con_call(c.name, args(c.args)); },
            [&](const Pi& p) {
              Term dom = run(p.domain);
              if (p.binder == x_) return pi(p.binder, dom, p.codomain);
              auto [b, body] = under_binder(p.binder, p.codomain);
              return pi(b, dom, run(body));
            },
            [&](const Lam& l) {
              if (l.binder == x_) return u;
              auto [b, body] = under_binder(l.binder, l.body);
              return lam(b, run(body));
            },
            [&](const Univ&) { return u; },
            [&](const App& a) { return sit::apply(run(a.head), args(a.args)); },
        },
        u.node().value);
  }

  // Renames `binder` in `body` when it would capture a free variable of the
  // replacement.
  std::pair<Var, Term> under_binder(const Var& binder, const Term& body) const {
    if (!captures(binder)) return {binder, body};
    Var renamed = fresh_var(binder.name + "'");
    return {renamed, SingleSubst(binder, var_call(renamed)).run(body)};
  }

  bool captures(const Var& binder) const {
    return std::find(fv_.begin(), fv_.end(), binder) != fv_.end();
  }

  const Var& target() const { return x_; }

 private:
  std::vector<Term> args(const std::vector<Term>& as) const {
    std::vector<Term> out;
    out.reserve(as.size());
    for (const auto& a : as) out.push_back(run(a));
    return out;
  }

  Var x_;
  Term v_;
  std::vector<Var> fv_;
};

Telescope subst_tele(const Telescope& tele, const Var& x, const Term& v) {
  Telescope out;
  out.reserve(tele.size());
  SingleSubst s(x, v);
  std::vector<std::pair<Var, Var>> renames;
  bool shadowed = false;
  for (const auto& b : tele) {
    Term ty = b.type;
    for (const auto& [from, to] : renames) ty = subst(ty, from, var_call(to));
    if (!shadowed) ty = s.run(ty);
    Var binder = b.var;
    if (binder == x) {
      shadowed = true;
    } else if (!shadowed && s.captures(binder)) {
      binder = fresh_var(b.var.name + "'");
      renames.emplace_back(b.var, binder);
    }
    out.push_back(Binding{binder, ty});
  }
  return out;
}

Pattern subst_pattern(const Pattern& p, const Substitution& s) {
  return std::visit(overloaded{
                        [&](const BindPat& b) {
                          if (!b.type) return p;
                          return bind_pat(b.var, subst(*b.type, s));
                        },
                        [&](const ConPat& c) {
                          std::vector<Pattern> args;
                          for (const auto& a : c.args) args.push_back(subst_pattern(a, s));
                          return con_pat(c.name, std::move(args));
                        },
                        [&](const ImpossiblePat&) { return p; },
                    },
                    p.node().value);
}

}  // namespace

const Term* Substitution::lookup(const Var& v) const {
  for (const auto& [x, t] : entries)
    if (x == v) return &t;
  return nullptr;
}

Term subst(const Term& u, const Var& x, const Term& v) { return SingleSubst(x, v).run(u); }

Term subst(const Term& u, const Substitution& s) {
  Term out = u;
  for (const auto& [x, v] : s.entries) out = subst(out, x, v);
  return out;
}

std::vector<Term> subst(std::span<const Term> us, const Substitution& s) {
  std::vector<Term> out;
  out.reserve(us.size());
  for (const auto& u : us) out.push_back(subst(u, s));
  return out;
}

Telescope subst(const Telescope& tele, const Substitution& s) {
  Telescope out = tele;
  for (const auto& [x, v] : s.entries) out = subst_tele(out, x, v);
  return out;
}

Pattern subst(const Pattern& p, const Substitution& s) { return subst_pattern(p, s); }

Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out = first;
  out.entries.insert(out.entries.end(), second.entries.begin(), second.entries.end());
  return out;
}

Substitution disjoint_union(const Substitution& a, const Substitution& b) {
  for (const auto& [x, _] : b.entries)
    if (a.lookup(x)) throw InternalError("disjoint_union: variable " + x.name + " bound twice");
  return compose(a, b);
}

Telescope disjoint_union(const Telescope& a, const Telescope& b) {
  for (const auto& eb : b)
    for (const auto& ea : a)
      if (ea.var == eb.var)
        throw InternalError("disjoint_union: variable " + eb.var.name + " bound twice");
  Telescope out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// ---------------------------------------------------------------------------
// Alpha equality

namespace {

using Renaming = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

bool same_var(const Var& a, const Var& b, const Renaming& env) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == a.id || it->second == b.id) return it->first == a.id && it->second == b.id;
  }
  return a.id == b.id;
}

bool alpha(const Term& a, const Term& b, Renaming& env);

bool alpha_all(const std::vector<Term>& as, const std::vector<Term>& bs, Renaming& env) {
  if (as.size() != bs.size()) return false;
  for (std::size_t i = 0; i < as.size(); ++i)
    if (!alpha(as[i], bs[i], env)) return false;
  return true;
}

bool alpha(const Term& a, const Term& b, Renaming& env) {
  if (a.same_node(b) && env.empty()) return true;
  if (a.node().value.index() != b.node().value.index()) return false;
  return std::visit(
      overloaded{
          [&](const FnCall& x) {
            const auto& y = *b.as<FnCall>();
            return x.name == y.name && alpha_all(x.args, y.args, env);
          },
          [&](const VarCall& x) {
            const auto& y = *b.as<VarCall>();
            return same_var(x.var, y.var, env) && alpha_all(x.args, y.args, env);
          },
          [&](const DataCall& x) {
            const auto& y = *b.as<DataCall>();
            return x.name == y.name && alpha_all(x.args, y.args, env);
          },
          [&](const ConCall& x) {
            const auto& y = *b.as<ConCall>();
            return x.name == y.name && alpha_all(x.args, y.args, env);
          },
          [&](const Pi& x) {
            const auto& y = *b.as<Pi>();
            if (!alpha(x.domain, y.domain, env)) return false;
            env.emplace_back(x.binder.id, y.binder.id);
            const bool ok = alpha(x.codomain, y.codomain, env);
            env.pop_back();
            return ok;
          },
          [&](const Lam& x) {
            const auto& y = *b.as<Lam>();
            env.emplace_back(x.binder.id, y.binder.id);
            const bool ok = alpha(x.body, y.body, env);
            env.pop_back();
            return ok;
          },
          [](const Univ&) { return true; },
          [&](const App& x) {
            const auto& y = *b.as<App>();
            return alpha(x.head, y.head, env) && alpha_all(x.args, y.args, env);
          },
      },
      a.node().value);
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  Renaming env;
  return alpha(a, b, env);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec { kTop = 0, kArrowDomain = 1, kArg = 2 };

void print(std::ostream& os, const Term& u, Prec prec, const PrintOptions& opts);

void print_spine(std::ostream& os, const std::string& head, const std::vector<Term>& args,
                 Prec prec, const PrintOptions& opts) {
  if (args.empty()) {
    os << head;
    return;
  }
  if (prec >= kArg) os << '(';
  os << head;
  for (const auto& a : args) {
    os << ' ';
    print(os, a, kArg, opts);
  }
  if (prec >= kArg) os << ')';
}

void print(std::ostream& os, const Term& u, Prec prec, const PrintOptions& opts) {
  const char* arrow = opts.unicode ? " → " : " -> ";
  std::visit(overloaded{
                 [&](const FnCall& f) { print_spine(os, f.name, f.args, prec, opts); },
                 [&](const VarCall& v) { print_spine(os, v.var.name, v.args, prec, opts); },
                 [&](const DataCall& d) { print_spine(os, d.name, d.args, prec, opts); },
                 [&](const ConCall& c) { print_spine(os, c.name, c.args, prec, opts); },
                 [&](const Pi& p) {
                   if (prec >= kArrowDomain) os << '(';
                   if (occurs_free(p.binder, p.codomain)) {
                     os << '(' << p.binder.name << " : ";
                     print(os, p.domain, kTop, opts);
                     os << ')';
                   } else {
                     print(os, p.domain, kArrowDomain, opts);
                   }
                   os << arrow;
                   print(os, p.codomain, kTop, opts);
                   if (prec >= kArrowDomain) os << ')';
                 },
                 [&](const Lam& l) {
                   if (prec >= kArrowDomain) os << '(';
                   os << "fn " << l.binder.name << " => ";
                   print(os, l.body, kTop, opts);
                   if (prec >= kArrowDomain) os << ')';
                 },
                 [&](const Univ&) { os << "Type"; },
                 [&](const App& a) {
                   if (prec >= kArg) os << '(';
                   print(os, a.head, kArg, opts);
                   for (const auto& x : a.args) {
                     os << ' ';
                     print(os, x, kArg, opts);
                   }
                   if (prec >= kArg) os << ')';
                 },
             },
             u.node().value);
}

void print_pattern(std::ostream& os, const Pattern& p, bool nested) {
  std::visit(overloaded{
                 [&](const BindPat& b) { os << b.var.name; },
                 [&](const ConPat& c) {
                   if (c.args.empty()) {
                     os << c.name;
                     return;
                   }
                   if (nested) os << '(';
                   os << c.name;
                   for (const auto& a : c.args) {
                     os << ' ';
                     print_pattern(os, a, true);
                   }
                   if (nested) os << ')';
                 },
                 [&](const ImpossiblePat&) { os << "impossible"; },
             },
             p.node().value);
}

}  // namespace

std::string to_string(const Term& u, PrintOptions opts) {
  std::ostringstream os;
  print(os, u, kTop, opts);
  return os.str();
}

std::string to_string(const Pattern& p) {
  std::ostringstream os;
  print_pattern(os, p, false);
  return os.str();
}

std::string to_string(std::span<const Term> us, PrintOptions opts) {
  std::string out;
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (i) out += ", ";
    out += to_string(us[i], opts);
  }
  return out;
}

std::string to_string(std::span<const Pattern> ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += to_string(ps[i]);
  }
  return out;
}

std::string to_string(const Telescope& tele, PrintOptions opts) {
  std::string out;
  for (std::size_t i = 0; i < tele.size(); ++i) {
    if (i) out += ' ';
    out += '(' + tele[i].var.name + " : " + to_string(tele[i].type, opts) + ')';
  }
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    if (i) out += ", ";
    out += s.entries[i].first.name + " := " + to_string(s.entries[i].second);
  }
  return out + "]";
}

}  // namespace sit

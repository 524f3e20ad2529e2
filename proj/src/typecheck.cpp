#include "sit/typecheck.hpp"

#include <algorithm>

#include "sit/coverage.hpp"
#include "sit/pattern_ops.hpp"

namespace sit {

namespace {

Substitution instantiate(const Telescope& tele, std::span<const Term> args) {
  Substitution s;
  for (std::size_t i = 0; i < tele.size() && i < args.size(); ++i)
    s.entries.emplace_back(tele[i].var, args[i]);
  return s;
}

void collect_bind_vars(const Pattern& p, std::vector<Var>& out) {
  if (const auto* b = p.as<BindPat>()) out.push_back(b->var);
  if (const auto* c = p.as<ConPat>())
    for (const auto& a : c->args) collect_bind_vars(a, out);
}

std::string describe(const Term& t) { return to_string(t); }

}  // namespace

// ---------------------------------------------------------------------------
// Context

const Term* Context::lookup(const Var& v) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->var == v) return &it->type;
  return nullptr;
}

Context Context::extend(const Var& v, Term type) const {
  Context out = *this;
  out.entries_.push_back(Binding{v, std::move(type)});
  return out;
}

Context Context::extend(const Telescope& tele) const {
  Context out = *this;
  out.entries_.insert(out.entries_.end(), tele.begin(), tele.end());
  return out;
}

// ---------------------------------------------------------------------------

TypeChecker::TypeChecker(Signature& sig, Evaluator& eval, CheckOptions opts)
    : sig_(sig), eval_(eval), opts_(opts) {}

void TypeChecker::fail(std::string_view code, std::string message,
                       std::optional<std::string> expected,
                       std::optional<std::string> actual) const {
  Diagnostic d;
  d.code = std::string(code);
  d.message = std::move(message);
  d.span = span_;
  d.expected = std::move(expected);
  d.actual = std::move(actual);
  throw TypeError(std::move(d));
}

void TypeChecker::warn(std::string_view code, std::string message, const SourceSpan& span) {
  Diagnostic d;
  d.severity = Severity::Warning;
  d.code = std::string(code);
  d.message = std::move(message);
  d.span = span;
  warnings_.push_back(std::move(d));
}

// ---------------------------------------------------------------------------
// Terms

void TypeChecker::check_term(const Context& ctx, const Term& u, const Term& type) {
  if (const auto* l = u.as<Lam>()) {
    Term t = eval_.whnf(type);
    const auto* p = t.as<Pi>();
    if (!p) fail(codes::kNotAFunction, "lambda checked against non-function type " + describe(t));
    check_term(ctx.extend(l->binder, p->domain), l->body,
               subst(p->codomain, p->binder, var_call(l->binder)));
    return;
  }
  if (const auto* c = u.as<ConCall>()) {
    check_con_call(ctx, *c, type);
    return;
  }
  Term actual = infer(ctx, u);
  if (!eval_.convertible(actual, type))
    fail(codes::kTypeMismatch, "type mismatch for " + describe(u), describe(type),
         describe(actual));
}

Term TypeChecker::apply_spine(const Context& ctx, Term type, std::span<const Term> args) {
  for (const auto& arg : args) {
    Term t = eval_.whnf(type);
    const auto* p = t.as<Pi>();
    if (!p) fail(codes::kNotAFunction, "cannot apply a term of type " + describe(t));
    check_term(ctx, arg, p->domain);
    type = subst(p->codomain, p->binder, arg);
  }
  return type;
}

Term TypeChecker::infer(const Context& ctx, const Term& u) {
  if (const auto* v = u.as<VarCall>()) {
    const Term* t = ctx.lookup(v->var);
    if (!t) fail(codes::kUnboundVar, "variable " + v->var.name + " is not in scope");
    return apply_spine(ctx, *t, v->args);
  }
  if (const auto* f = u.as<FnCall>()) {
    const FuncDecl* decl = sig_.find_func(f->name);
    if (!decl) fail(codes::kUnknownHead, "unknown function " + f->name);
    check_args(ctx, f->args, decl->telescope);
    return subst(decl->result, instantiate(decl->telescope, f->args));
  }
  if (const auto* d = u.as<DataCall>()) {
    const DataDecl* decl = sig_.find_data(d->name);
    if (!decl) fail(codes::kUnknownHead, "unknown data type " + d->name);
    check_args(ctx, d->args, decl->telescope);
    return univ();
  }
  if (const auto* c = u.as<ConCall>()) {
    auto ref = sig_.find_ctor(c->name);
    if (!ref) fail(codes::kUnknownHead, "unknown constructor " + c->name);
    // Only a data type without arguments determines its own instantiation.
    if (!ref->data->telescope.empty())
      fail(codes::kCannotInfer, "cannot infer the type of constructor " + c->name +
                                    " without an expected type");
    Term type = data_call(ref->data->name);
    check_con_call(ctx, *c, type);
    return type;
  }
  if (const auto* p = u.as<Pi>()) {
    check_type(ctx, p->domain);
    check_type(ctx.extend(p->binder, p->domain), p->codomain);
    return univ();
  }
  if (u.is<Lam>()) fail(codes::kCannotInfer, "cannot infer the type of a lambda " + describe(u));
  if (u.is<Univ>()) return univ();
  const auto& a = *u.as<App>();
  return apply_spine(ctx, infer(ctx, a.head), a.args);
}

void TypeChecker::check_type(const Context& ctx, const Term& type) {
  check_term(ctx, type, univ());
}

void TypeChecker::check_telescope(const Context& ctx, const Telescope& tele) {
  Context cur = ctx;
  for (const auto& b : tele) {
    check_type(cur, b.type);
    cur = cur.extend(b.var, b.type);
  }
}

void TypeChecker::check_args(const Context& ctx, std::span<const Term> us,
                             const Telescope& tele) {
  if (us.size() != tele.size())
    fail(codes::kArity, "expected " + std::to_string(tele.size()) + " arguments, got " +
                            std::to_string(us.size()));
  Substitution s;
  for (std::size_t i = 0; i < us.size(); ++i) {
    Term expected = subst(tele[i].type, s);
    try {
      check_term(ctx, us[i], expected);
    } catch (const TypeError& e) {
      Diagnostic d = e.diagnostic();
      d.message = "argument " + std::to_string(i) + ": " + d.message;
      throw TypeError(std::move(d));
    }
    s.entries.emplace_back(tele[i].var, us[i]);
  }
}

Telescope TypeChecker::ctor_fields_at(const Signature::CtorRef& ref,
                                      std::span<const Term> indices, bool lenient,
                                      const std::string& ctor) {
  const auto& data = *ref.data;
  const auto& row = *ref.row;
  const Substitution by_index = instantiate(data.telescope, indices);
  if (!row.patterns) return subst(row.fields, by_index);
  auto outcome = eval_.match(indices, *row.patterns);
  const std::string at = to_string(data_call(data.name, {indices.begin(), indices.end()}));
  if (auto* m = std::get_if<Matched>(&outcome)) return subst(subst(row.fields, m->subst), by_index);
  if (std::holds_alternative<Mismatch>(outcome))
    fail(codes::kCtorUnavailable, "constructor " + ctor + " is not available at " + at);
  if (!lenient)
    fail(codes::kCtorStuck, "cannot decide whether constructor " + ctor + " is available at " +
                                at + ": matching index " +
                                std::to_string(std::get<Stuck>(outcome).position) + " is stuck");
  std::vector<Var> binds;
  for (const auto& p : *row.patterns) collect_bind_vars(p, binds);
  Substitution opaque;
  for (const auto& v : binds) opaque.entries.emplace_back(v, var_call(fresh_var(v.name)));
  return subst(row.fields, opaque);
}

void TypeChecker::check_con_call(const Context& ctx, const ConCall& c, const Term& type) {
  auto ref = sig_.find_ctor(c.name);
  if (!ref) fail(codes::kUnknownHead, "unknown constructor " + c.name);
  Term t = eval_.whnf(type);
  const auto* d = t.as<DataCall>();
  if (!d) fail(codes::kNotData, "constructor " + c.name + " used at non-data type " + describe(t));
  if (d->name != ref->data->name)
    fail(codes::kForeignCtor, "constructor " + c.name + " does not belong to " + d->name,
         describe(t), ref->data->name);
  if (c.args.size() != ref->row->fields.size())
    fail(codes::kArity, "constructor " + c.name + " expects " +
                            std::to_string(ref->row->fields.size()) + " arguments, got " +
                            std::to_string(c.args.size()));
  Telescope fields = ctor_fields_at(*ref, d->args, false, c.name);
  check_args(ctx, c.args, fields);
}

// ---------------------------------------------------------------------------
// Patterns

PatternsResult TypeChecker::check_pattern(const Context& ctx, const Pattern& p, const Term& type) {
  return check_pattern_impl(ctx, p, type, false);
}

PatternsResult TypeChecker::check_patterns(const Context& ctx, std::span<const Pattern> ps,
                                           const Telescope& tele) {
  return check_patterns_impl(ctx, ps, tele, false);
}

PatternsResult TypeChecker::check_pattern_impl(const Context& ctx, const Pattern& p,
                                               const Term& type, bool lenient) {
  if (const auto* b = p.as<BindPat>()) {
    return PatternsResult{{bind_pat(b->var, type)}, {Binding{b->var, type}}};
  }
  Term t = eval_.whnf(type);
  const auto* d = t.as<DataCall>();
  if (const auto* c = p.as<ConPat>()) {
    if (!d)
      fail(codes::kNotData, "constructor pattern " + to_string(p) + " at non-data type " +
                                describe(t));
    auto ref = sig_.find_ctor(c->name);
    if (!ref) fail(codes::kUnknownHead, "unknown constructor " + c->name);
    if (ref->data->name != d->name)
      fail(codes::kForeignCtor, "constructor " + c->name + " does not belong to " + d->name,
           describe(t), ref->data->name);
    if (c->args.size() != ref->row->fields.size())
      fail(codes::kArity, "constructor pattern " + c->name + " expects " +
                              std::to_string(ref->row->fields.size()) + " arguments, got " +
                              std::to_string(c->args.size()));
    Telescope fields = ctor_fields_at(*ref, d->args, lenient, c->name);
    auto sub = check_patterns_impl(ctx, c->args, fields, lenient);
    return PatternsResult{{con_pat(c->name, std::move(sub.patterns))}, std::move(sub.bindings)};
  }
  // impossible
  if (!d) fail(codes::kNotData, "impossible pattern at non-data type " + describe(t));
  const DataDecl* data = sig_.find_data(d->name);
  if (!data) fail(codes::kUnknownHead, "unknown data type " + d->name);
  for (const auto& row : data->ctors) {
    if (!row.patterns)
      fail(codes::kImpossibleAvailable,
           "impossible pattern, but constructor " + row.name + " of " + describe(t) +
               " is always available");
    auto outcome = eval_.match(d->args, *row.patterns);
    if (std::holds_alternative<Matched>(outcome))
      fail(codes::kImpossibleAvailable,
           "impossible pattern, but constructor " + row.name + " is available at " + describe(t));
    if (std::holds_alternative<Stuck>(outcome) && !lenient)
      fail(codes::kImpossibleStuck, "impossible pattern, but availability of constructor " +
                                        row.name + " at " + describe(t) + " cannot be decided");
  }
  return PatternsResult{{impossible_pat()}, {}};
}

PatternsResult TypeChecker::check_patterns_impl(const Context& ctx, std::span<const Pattern> ps,
                                                const Telescope& tele, bool lenient) {
  if (ps.size() != tele.size())
    fail(codes::kArity, "expected " + std::to_string(tele.size()) + " patterns, got " +
                            std::to_string(ps.size()));
  PatternsResult out;
  Telescope rest = tele;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Binding head = rest.front();
    rest.erase(rest.begin());
    auto r = check_pattern_impl(ctx.extend(out.bindings), ps[i], head.type, lenient);
    for (const auto& nb : r.bindings) {
      if (nb.var.name != "_")
        for (const auto& ob : out.bindings)
          if (ob.var.name == nb.var.name)
            fail(codes::kDuplicatePatVar, "pattern variable " + nb.var.name + " is bound twice");
      out.bindings.push_back(nb);
    }
    const Pattern& checked = r.patterns.front();
    Term replacement = var_call(fresh_var(head.var.name));
    if (contains_impossible(checked)) {
      lenient = true;
    } else {
      replacement = to_term(checked);
    }
    rest = subst(rest, Substitution{{{head.var, replacement}}});
    out.patterns.push_back(checked);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clauses, constructor rows, declarations

Clause TypeChecker::check_clause(const Context& ctx, const Telescope& tele, const Term& result,
                                 const Clause& cl) {
  set_span(cl.span);
  const bool impossible = contains_impossible(cl.patterns);
  if (cl.body && impossible)
    fail(codes::kBodyWithImpossible, "clause with an impossible pattern must not have a body");
  if (!cl.body && !impossible)
    fail(codes::kMissingBody, "clause without an impossible pattern needs a body");
  auto r = check_patterns(ctx, cl.patterns, tele);
  if (cl.body) {
    Substitution s;
    const auto terms = to_terms(r.patterns);
    for (std::size_t i = 0; i < tele.size(); ++i) s.entries.emplace_back(tele[i].var, terms[i]);
    check_term(ctx.extend(r.bindings), *cl.body, subst(result, s));
  }
  return Clause{std::move(r.patterns), cl.body, cl.span};
}

CtorRow TypeChecker::check_ctor_row(const Context& ctx, const DataDecl& data, const CtorRow& row) {
  set_span(row.span);
  if (!row.patterns) {
    check_telescope(ctx.extend(data.telescope), row.fields);
    return row;
  }
  auto r = check_patterns(ctx, *row.patterns, data.telescope);
  check_telescope(ctx.extend(r.bindings), row.fields);
  if (opts_.strict_fig6) {
    try {
      check_telescope(ctx.extend(data.telescope), row.fields);
    } catch (const TypeError& e) {
      warn(codes::kStrictFieldScope,
           "fields of " + row.name + " are not well-formed under the data telescope alone: " +
               e.diagnostic().message,
           row.span);
    }
  }
  CtorRow out = row;
  out.patterns = std::move(r.patterns);
  return out;
}

void TypeChecker::check_data(const DataDecl& d) {
  set_span(d.span);
  check_telescope(Context{}, d.telescope);
  sig_.add(DataDecl{d.name, d.telescope, {}, d.span});
  DataDecl elaborated{d.name, d.telescope, {}, d.span};
  for (const auto& row : d.ctors) {
    set_span(row.span);
    const bool clash = sig_.contains(row.name) || row.name == d.name ||
                       std::any_of(elaborated.ctors.begin(), elaborated.ctors.end(),
                                   [&](const CtorRow& r) { return r.name == row.name; });
    if (clash) fail(codes::kDuplicateDecl, "duplicate name " + row.name);
    elaborated.ctors.push_back(check_ctor_row(Context{}, d, row));
  }
  sig_.replace_last(std::move(elaborated));
}

void TypeChecker::check_func(const FuncDecl& f) {
  set_span(f.span);
  check_telescope(Context{}, f.telescope);
  check_type(Context{f.telescope}, f.result);
  // Clauses are checked before the function can unfold.
  sig_.add(FuncDecl{f.name, f.telescope, f.result, {}, f.span});
  FuncDecl elaborated{f.name, f.telescope, f.result, {}, f.span};
  for (const auto& cl : f.clauses)
    elaborated.clauses.push_back(check_clause(Context{}, f.telescope, f.result, cl));
  sig_.replace_last(elaborated);
  if (opts_.coverage) {
    set_span(f.span);
    auto report = check_coverage(eval_, elaborated);
    for (auto& w : report.warnings) warnings_.push_back(std::move(w));
  }
}

void TypeChecker::check_declaration(const Declaration& decl) {
  set_span(decl_span(decl));
  if (sig_.contains(decl_name(decl)))
    fail(codes::kDuplicateDecl, "duplicate declaration " + decl_name(decl));
  try {
    if (const auto* d = std::get_if<DataDecl>(&decl))
      check_data(*d);
    else
      check_func(std::get<FuncDecl>(decl));
  } catch (const FuelExhausted& e) {
    if (e.diagnostic().span.valid()) throw;
    Diagnostic d = e.diagnostic();
    d.span = span_;
    throw FuelExhausted(std::move(d));
  }
}

CheckedProgram check_signature(std::span<const Declaration> decls, CheckOptions opts) {
  CheckedProgram out;
  Evaluator eval(out.signature, opts.eval);
  TypeChecker checker(out.signature, eval, opts);
  for (const auto& d : decls) checker.check_declaration(d);
  out.warnings = checker.warnings();
  return out;
}

}  // namespace sit

#include <unordered_set>

#include "sit/frontend.hpp"

namespace sit {

const GlobalEntity* GlobalScope::find(const std::string& name) const {
  auto it = names_.find(name);
  return it == names_.end() ? nullptr : &it->second;
}

bool GlobalScope::is_constructor(const std::string& name) const {
  const GlobalEntity* e = find(name);
  return e && e->kind == GlobalEntity::Kind::Constructor;
}

void GlobalScope::declare(const std::string& name, GlobalEntity entity) {
  names_.insert_or_assign(name, std::move(entity));
}

namespace {

[[noreturn]] void fail(std::string_view code, std::string message, const SourceSpan& span) {
  Diagnostic d;
  d.code = std::string(code);
  d.message = std::move(message);
  d.span = span;
  throw ParseError(std::move(d));
}

// Local binders, innermost last.
using Locals = std::vector<Var>;

const Var* find_local(const Locals& locals, const std::string& name) {
  for (auto it = locals.rbegin(); it != locals.rend(); ++it)
    if (it->name == name) return &*it;
  return nullptr;
}

class Resolver {
 public:
  explicit Resolver(const GlobalScope& globals) : globals_(globals) {}

  Var binder(const std::string& name, const SourceSpan& span) const {
    if (globals_.is_constructor(name))
      fail(codes::kShadowsCtor, "binder " + name + " shadows a constructor", span);
    return fresh_var(name);
  }

  Term expr(const surface::Expr& e, const Locals& locals) const {
    using namespace surface;
    if (std::holds_alternative<TypeLit>(e.node)) return univ();
    if (const auto* i = std::get_if<Ident>(&e.node)) return head(i->name, {}, e.span, locals);
    if (const auto* l = std::get_if<Lambda>(&e.node)) {
      Var x = binder(l->name, e.span);
      Locals inner = locals;
      inner.push_back(x);
      return lam(x, expr(*l->body, inner));
    }
    if (const auto* p = std::get_if<PiType>(&e.node)) {
      const Term domain = expr(*p->domain, locals);
      if (p->names.empty()) return pi(fresh_var("_"), domain, expr(*p->codomain, locals));
      Locals inner = locals;
      std::vector<Var> vs;
      for (const auto& n : p->names) {
        vs.push_back(binder(n, e.span));
        if (n != "_") inner.push_back(vs.back());
      }
      Term body = expr(*p->codomain, inner);
      for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = pi(*it, domain, body);
      return body;
    }
    // Flatten nested applications so the head sees the whole spine.
    std::vector<const Expr*> arg_exprs;
    const Expr* h = &e;
    while (const auto* ap = std::get_if<Apply>(&h->node)) {
      for (auto it = ap->args.rbegin(); it != ap->args.rend(); ++it) arg_exprs.push_back(it->get());
      h = ap->head.get();
    }
    std::vector<Term> args;
    for (auto it = arg_exprs.rbegin(); it != arg_exprs.rend(); ++it)
      args.push_back(expr(**it, locals));
    if (const auto* i = std::get_if<Ident>(&h->node)) return head(i->name, std::move(args), e.span, locals);
    return sit::apply(expr(*h, locals), std::move(args));
  }

  Term head(const std::string& name, std::vector<Term> args, const SourceSpan& span,
            const Locals& locals) const {
    if (name != "_") {
      if (const Var* v = find_local(locals, name)) return var_call(*v, std::move(args));
    }
    const GlobalEntity* g = name == "_" ? nullptr : globals_.find(name);
    if (!g) fail(codes::kUnknownName, "unknown identifier " + name, span);
    const std::size_t arity = g->params.size();
    if (args.size() > arity) {
      if (g->kind != GlobalEntity::Kind::Function)
        fail(codes::kOverApplied,
             name + " takes " + std::to_string(arity) + " arguments but was given " +
                 std::to_string(args.size()),
             span);
      std::vector<Term> rest(args.begin() + static_cast<std::ptrdiff_t>(arity), args.end());
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(arity), args.end());
      return sit::apply(fn_call(name, std::move(args)), std::move(rest));
    }
    // Under-applied heads are eta-expanded over the missing parameters.
    std::vector<Var> missing;
    for (std::size_t i = args.size(); i < arity; ++i) {
      missing.push_back(fresh_var(g->params[i]));
      args.push_back(var_call(missing.back()));
    }
    Term body = [&] {
      switch (g->kind) {
        case GlobalEntity::Kind::Function: return fn_call(name, std::move(args));
        case GlobalEntity::Kind::Data: return data_call(name, std::move(args));
        case GlobalEntity::Kind::Constructor: break;
      }
      return con_call(name, std::move(args));
    }();
    for (auto it = missing.rbegin(); it != missing.rend(); ++it) body = lam(*it, body);
    return body;
  }

  // Resolves a telescope, extending `locals` with its binders.
  Telescope telescope(const std::vector<surface::TeleEntry>& tele, Locals& locals) const {
    Telescope out;
    for (const auto& entry : tele) {
      const Term type = expr(*entry.type, locals);
      std::vector<Var> vs;
      for (const auto& n : entry.names) vs.push_back(binder(n, entry.span));
      for (std::size_t i = 0; i < vs.size(); ++i) {
        out.push_back(Binding{vs[i], type});
        if (entry.names[i] != "_") locals.push_back(vs[i]);
      }
    }
    return out;
  }

  Pattern pattern(const surface::Pat& p, Locals& bound) const {
    if (p.impossible) return impossible_pat();
    if (globals_.is_constructor(p.name)) {
      std::vector<Pattern> args;
      for (const auto& a : p.args) args.push_back(pattern(a, bound));
      return con_pat(p.name, std::move(args));
    }
    if (!p.args.empty())
      fail(codes::kNotAConstructor, p.name + " is not a constructor", p.span);
    Var v = fresh_var(p.name);
    if (p.name != "_") bound.push_back(v);
    return bind_pat(v);
  }

  std::vector<Pattern> patterns(const std::vector<surface::Pat>& ps, Locals& bound) const {
    std::vector<Pattern> out;
    for (const auto& p : ps) out.push_back(pattern(p, bound));
    return out;
  }

 private:
  const GlobalScope& globals_;
};

std::vector<std::string> param_names(const std::vector<surface::TeleEntry>& tele) {
  std::vector<std::string> out;
  for (const auto& e : tele)
    for (const auto& n : e.names) out.push_back(n == "_" ? "x" : n);
  return out;
}

}  // namespace

ResolvedProgram resolve(const surface::File& file) {
  ResolvedProgram prog;
  GlobalScope& globals = prog.globals;
  const Resolver r(globals);

  auto declare = [&](const std::string& name, GlobalEntity e, const SourceSpan& span) {
    if (globals.find(name)) fail(codes::kDuplicateName, "duplicate name " + name, span);
    globals.declare(name, std::move(e));
  };

  for (const auto& decl : file.decls) {
    if (const auto* d = std::get_if<surface::DataDecl>(&decl)) {
      declare(d->name, GlobalEntity{GlobalEntity::Kind::Data, param_names(d->telescope)}, d->span);
      DataDecl out;
      out.name = d->name;
      out.span = d->span;
      Locals tele_scope;
      out.telescope = r.telescope(d->telescope, tele_scope);
      std::unordered_set<std::string> row_names;
      for (const auto& row : d->rows) {
        if (globals.find(row.name) || !row_names.insert(row.name).second)
          fail(codes::kDuplicateName, "duplicate name " + row.name, row.span);
        CtorRow cr;
        cr.name = row.name;
        cr.span = row.span;
        // Fields of a pattern row see the pattern binders only.
        Locals scope;
        if (row.patterns) cr.patterns = r.patterns(*row.patterns, scope);
        else scope = tele_scope;
        cr.fields = r.telescope(row.fields, scope);
        out.ctors.push_back(std::move(cr));
      }
      for (const auto& row : d->rows)
        declare(row.name, GlobalEntity{GlobalEntity::Kind::Constructor, param_names(row.fields)},
                row.span);
      prog.decls.emplace_back(std::move(out));
    } else {
      const auto& f = std::get<surface::DefDecl>(decl);
      if (globals.find(f.name)) fail(codes::kDuplicateName, "duplicate name " + f.name, f.span);
      FuncDecl out{f.name, {}, univ(), {}, f.span};
      Locals scope;
      out.telescope = r.telescope(f.telescope, scope);
      out.result = r.expr(*f.result, scope);
      // Visible to its own clauses.
      globals.declare(f.name, GlobalEntity{GlobalEntity::Kind::Function, param_names(f.telescope)});
      for (const auto& cl : f.clauses) {
        Clause c;
        c.span = cl.span;
        Locals bound;
        c.patterns = r.patterns(cl.patterns, bound);
        if (cl.body) c.body = r.expr(*cl.body, bound);
        out.clauses.push_back(std::move(c));
      }
      prog.decls.emplace_back(std::move(out));
    }
  }
  return prog;
}

Term resolve_expr(const GlobalScope& globals, const surface::Expr& e, const std::vector<Var>& locals) {
  return Resolver(globals).expr(e, locals);
}

}  // namespace sit

#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "sit/pattern_ops.hpp"

namespace sit::test {

std::string corpus_path(const std::string& name) { return std::string(SIT_CORPUS_DIR) + "/" + name; }
std::string fixture_dir() { return std::string(SIT_FIXTURE_DIR); }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Term Program::term(const std::string& text, const std::vector<Var>& locals) const {
  return resolve_expr(resolved.globals, *parse_expr(text), locals);
}

const FuncDecl& Program::func(const std::string& name) const {
  const FuncDecl* f = sig().find_func(name);
  if (!f) throw std::runtime_error("no function " + name);
  return *f;
}

const DataDecl& Program::data(const std::string& name) const {
  const DataDecl* d = sig().find_data(name);
  if (!d) throw std::runtime_error("no data type " + name);
  return *d;
}

std::unique_ptr<Program> load_text(const std::string& text, CheckOptions opts) {
  auto p = std::make_unique<Program>();
  p->resolved = resolve(parse_file(text, "<test>"));
  p->checked = check_signature(p->resolved.decls, opts);
  p->eval = std::make_unique<Evaluator>(p->checked.signature, opts.eval);
  return p;
}

std::unique_ptr<Program> load_corpus(const std::string& name, CheckOptions opts) {
  return load_text(read_text(corpus_path(name)), opts);
}

std::vector<NegativeFixture> negative_fixtures() {
  std::vector<NegativeFixture> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture_dir() + "/negative")) {
    NegativeFixture f;
    f.path = e.path().string();
    std::istringstream in(read_text(f.path));
    std::string line;
    while (std::getline(in, line) && line.rfind("-- ", 0) == 0) {
      if (line.rfind("-- expect: ", 0) == 0) f.code = line.substr(11);
      if (line.rfind("-- message: ", 0) == 0) f.message = line.substr(12);
    }
    if (f.code.empty()) throw std::runtime_error("fixture without expect header: " + f.path);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(),
            [](const NegativeFixture& a, const NegativeFixture& b) { return a.path < b.path; });
  return out;
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(SIT_CORPUS_DIR))
    if (e.path().extension() == ".sit") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace oracle {

namespace {

struct UTerm;
using UPtr = std::shared_ptr<const UTerm>;

struct UTerm {
  bool is_var = false;
  std::uint64_t var = 0;
  std::string head;  // "c:name", "d:name", "U", or an opaque printed term
  std::vector<UPtr> args;
  std::optional<Term> opaque;
};

struct Unifier {
  std::unordered_map<std::uint64_t, UPtr> bound;
  std::unordered_map<std::uint64_t, Var> names;

  UPtr convert(const Term& t) {
    auto u = std::make_shared<UTerm>();
    if (const auto* v = t.as<VarCall>(); v && v->args.empty()) {
      u->is_var = true;
      u->var = v->var.id;
      names.emplace(v->var.id, v->var);
      return u;
    }
    const std::vector<Term>* args = nullptr;
    if (const auto* c = t.as<ConCall>()) {
      u->head = "c:" + c->name;
      args = &c->args;
    } else if (const auto* d = t.as<DataCall>()) {
      u->head = "d:" + d->name;
      args = &d->args;
    } else if (t.is<Univ>()) {
      u->head = "U";
    } else {
      u->head = "?" + to_string(t);
      u->opaque = t;
    }
    if (args)
      for (const auto& a : *args) u->args.push_back(convert(a));
    return u;
  }

  UPtr walk(UPtr u) const {
    while (u->is_var) {
      auto it = bound.find(u->var);
      if (it == bound.end()) break;
      u = it->second;
    }
    return u;
  }

  bool occurs(std::uint64_t v, const UPtr& u) const {
    UPtr w = walk(u);
    if (w->is_var) return w->var == v;
    return std::any_of(w->args.begin(), w->args.end(), [&](const UPtr& a) { return occurs(v, a); });
  }

  bool unify(const UPtr& a, const UPtr& b) {
    UPtr x = walk(a), y = walk(b);
    if (x->is_var && y->is_var && x->var == y->var) return true;
    if (x->is_var) {
      if (occurs(x->var, y)) return false;
      bound[x->var] = y;
      return true;
    }
    if (y->is_var) return unify(y, x);
    if (x->head != y->head || x->args.size() != y->args.size()) return false;
    for (std::size_t i = 0; i < x->args.size(); ++i)
      if (!unify(x->args[i], y->args[i])) return false;
    return true;
  }

  Term back(const UPtr& u) const {
    UPtr w = walk(u);
    if (w->is_var) return var_call(names.at(w->var));
    if (w->opaque) return *w->opaque;
    if (w->head == "U") return univ();
    std::vector<Term> args;
    for (const auto& a : w->args) args.push_back(back(a));
    const std::string name = w->head.substr(2);
    return w->head[0] == 'c' ? con_call(name, std::move(args)) : data_call(name, std::move(args));
  }
};

struct Run {
  Unifier u;
  Class cls = Class::Mismatch;
};

Run run(const std::vector<Term>& indices, const std::vector<Term>& pattern_terms,
        const std::vector<Var>& pattern_vars) {
  Run r;
  if (indices.size() != pattern_terms.size()) throw std::logic_error("oracle: arity");
  std::unordered_set<std::uint64_t> flexible_pattern;
  for (const auto& v : pattern_vars) flexible_pattern.insert(v.id);
  std::vector<UPtr> lhs, rhs;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    lhs.push_back(r.u.convert(indices[i]));
    rhs.push_back(r.u.convert(pattern_terms[i]));
  }
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (!r.u.unify(rhs[i], lhs[i])) return r;  // pattern side first: its variables bind
  // Free variables of the indices must survive as distinct variables.
  std::unordered_set<std::uint64_t> index_vars;
  for (const auto& t : indices)
    for (const auto& v : free_vars(t))
      if (!flexible_pattern.count(v.id)) index_vars.insert(v.id);
  std::unordered_set<std::uint64_t> images;
  for (auto id : index_vars) {
    UPtr w = r.u.walk(r.u.convert(var_call(r.u.names.at(id))));
    if (!w->is_var || (w->var != id && index_vars.count(w->var)) || !images.insert(w->var).second) {
      r.cls = Class::Stuck;
      return r;
    }
  }
  r.cls = Class::Matched;
  return r;
}

}  // namespace

const char* name(Class c) {
  switch (c) {
    case Class::Matched: return "Matched";
    case Class::Mismatch: return "Mismatch";
    case Class::Stuck: return "Stuck";
  }
  return "?";
}

Class classify(const std::vector<Term>& indices, const std::vector<Term>& pattern_terms,
               const std::vector<Var>& pattern_vars) {
  return run(indices, pattern_terms, pattern_vars).cls;
}

std::optional<Substitution> solve(const std::vector<Term>& indices,
                                  const std::vector<Term>& pattern_terms,
                                  const std::vector<Var>& pattern_vars) {
  Run r = run(indices, pattern_terms, pattern_vars);
  if (r.cls != Class::Matched) return std::nullopt;
  Substitution s;
  for (const auto& v : pattern_vars) {
    r.u.names.emplace(v.id, v);
    s.entries.emplace_back(v, r.u.back(r.u.convert(var_call(v))));
  }
  return s;
}

}  // namespace oracle

namespace {

void collect_vars(const Pattern& p, std::vector<Var>& out) {
  if (const auto* b = p.as<BindPat>()) out.push_back(b->var);
  if (const auto* c = p.as<ConPat>())
    for (const auto& a : c->args) collect_vars(a, out);
}

Term pattern_term(const Pattern& p) {
  if (const auto* b = p.as<BindPat>()) return var_call(b->var);
  const auto* c = p.as<ConPat>();
  if (!c) throw std::logic_error("pattern_term: impossible");
  std::vector<Term> args;
  for (const auto& a : c->args) args.push_back(pattern_term(a));
  return con_call(c->name, std::move(args));
}

Substitution by_telescope(const Telescope& tele, const std::vector<Term>& us) {
  Substitution s;
  for (std::size_t i = 0; i < tele.size() && i < us.size(); ++i)
    s.entries.emplace_back(tele[i].var, us[i]);
  return s;
}

// Field telescope of `row` at indices `us`, or nullopt when the oracle does
// not say Matched.
std::optional<Telescope> oracle_fields(const DataDecl& d, const CtorRow& row,
                                       const std::vector<Term>& us) {
  if (!row.patterns) return subst(row.fields, by_telescope(d.telescope, us));
  auto sigma = oracle::solve(us, pattern_terms(*row.patterns), pattern_vars(*row.patterns));
  if (!sigma) return std::nullopt;
  return subst(subst(row.fields, *sigma), by_telescope(d.telescope, us));
}

constexpr std::size_t kValueCap = 4000;

}  // namespace

std::vector<Var> pattern_vars(const std::vector<Pattern>& ps) {
  std::vector<Var> out;
  for (const auto& p : ps) collect_vars(p, out);
  return out;
}

std::vector<Term> pattern_terms(const std::vector<Pattern>& ps) {
  std::vector<Term> out;
  for (const auto& p : ps) out.push_back(pattern_term(p));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Term> Enumerator::types(int depth) {
  std::vector<Term> out;
  if (depth <= 0) return out;
  for (const auto& decl : eval_.signature().decls()) {
    const auto* d = std::get_if<DataDecl>(&decl);
    if (!d) continue;
    for (auto& args : tuples(d->telescope, depth - 1, kValueCap))
      out.push_back(data_call(d->name, std::move(args)));
  }
  return out;
}

std::vector<Term> Enumerator::values(const Term& type, int depth) {
  std::vector<Term> out;
  if (depth <= 0) return out;
  const Term t = eval_.normalize(type);
  if (t.is<Univ>()) return types(depth);
  const auto* dc = t.as<DataCall>();
  if (!dc) return out;
  const DataDecl* d = eval_.signature().find_data(dc->name);
  if (!d) return out;
  for (const auto& row : d->ctors) {
    auto fields = oracle_fields(*d, row, dc->args);
    if (!fields) continue;
    for (auto& args : tuples(*fields, depth - 1, kValueCap)) {
      out.push_back(con_call(row.name, std::move(args)));
      if (out.size() >= kValueCap) return out;
    }
  }
  return out;
}

std::vector<std::vector<Term>> Enumerator::tuples(const Telescope& tele, int depth,
                                                  std::size_t cap) {
  std::vector<std::vector<Term>> out;
  if (tele.empty()) {
    out.emplace_back();
    return out;
  }
  for (const auto& v : values(tele.front().type, depth)) {
    const Telescope rest =
        subst(Telescope(tele.begin() + 1, tele.end()), Substitution{{{tele.front().var, v}}});
    for (auto& tail : tuples(rest, depth, cap - out.size())) {
      tail.insert(tail.begin(), v);
      out.push_back(std::move(tail));
      if (out.size() >= cap) return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct RowGen {
  std::mt19937& rng;
  Evaluator& eval;
  int counter = 0;

  Pattern bind() { return bind_pat(fresh_var("v" + std::to_string(counter++))); }

  Pattern at(const Term& type, int depth) {
    if (depth <= 0 || coin(rng, 0.3)) return bind();
    const Term t = eval.normalize(type);
    const auto* dc = t.as<DataCall>();
    if (!dc) return bind();
    const DataDecl* d = eval.signature().find_data(dc->name);
    if (!d || d->ctors.empty()) return bind();
    std::vector<const CtorRow*> rows;
    for (const auto& r : d->ctors) rows.push_back(&r);
    std::shuffle(rows.begin(), rows.end(), rng);
    for (const CtorRow* row : rows) {
      auto fields = oracle_fields(*d, *row, dc->args);
      if (!fields) continue;
      return con_pat(row->name, sequence(*fields, depth - 1));
    }
    return bind();
  }

  std::vector<Pattern> sequence(Telescope rest, int depth) {
    std::vector<Pattern> out;
    while (!rest.empty()) {
      const Binding head = rest.front();
      Pattern p = at(head.type, depth);
      rest = subst(Telescope(rest.begin() + 1, rest.end()),
                   Substitution{{{head.var, pattern_term(p)}}});
      out.push_back(std::move(p));
    }
    return out;
  }
};

struct CtorInfo {
  std::string name;
  std::size_t arity;
};

std::vector<CtorInfo> ctor_infos(const Signature& sig) {
  std::vector<CtorInfo> out;
  for (const auto& decl : sig.decls())
    if (const auto* d = std::get_if<DataDecl>(&decl))
      for (const auto& r : d->ctors) out.push_back({r.name, r.fields.size()});
  return out;
}

}  // namespace

std::vector<Pattern> random_row(std::mt19937& rng, Evaluator& eval, const Telescope& tele,
                                int depth) {
  RowGen g{rng, eval};
  return g.sequence(tele, depth);
}

Pattern random_pattern(std::mt19937& rng, const Signature& sig, int depth) {
  const auto ctors = ctor_infos(sig);
  if (ctors.empty() || depth <= 0 || coin(rng, 0.3)) return bind_pat(fresh_var("p"));
  const auto& c = ctors[std::uniform_int_distribution<std::size_t>(0, ctors.size() - 1)(rng)];
  std::vector<Pattern> args;
  for (std::size_t i = 0; i < c.arity; ++i) args.push_back(random_pattern(rng, sig, depth - 1));
  return con_pat(c.name, std::move(args));
}

Term random_term(std::mt19937& rng, const Signature& sig, const std::vector<Var>& pool,
                 int depth) {
  const auto ctors = ctor_infos(sig);
  if (!pool.empty() && (depth <= 0 || coin(rng, 0.25)))
    return var_call(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
  std::vector<CtorInfo> choices;
  for (const auto& c : ctors)
    if (depth > 0 || c.arity == 0) choices.push_back(c);
  if (choices.empty()) return univ();
  const auto& c = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
  std::vector<Term> args;
  for (std::size_t i = 0; i < c.arity; ++i) args.push_back(random_term(rng, sig, pool, depth - 1));
  return con_call(c.name, std::move(args));
}

}  // namespace sit::test

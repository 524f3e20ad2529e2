#include "sit/coverage.hpp"

#include <algorithm>
#include <sstream>

#include "sit/pattern_ops.hpp"

namespace sit {

namespace {

[[noreturn]] void coverage_error(std::string_view code, std::string message,
                                 const SourceSpan& span) {
  Diagnostic d;
  d.code = std::string(code);
  d.message = std::move(message);
  d.span = span;
  throw TypeError(std::move(d));
}

Telescope freshen(const Telescope& tele) {
  Telescope out;
  Substitution renames;
  for (const auto& b : tele) {
    Var v = fresh_var(b.var.name);
    out.push_back(Binding{v, subst(b.type, renames)});
    renames.entries.emplace_back(b.var, var_call(v));
  }
  return out;
}

// Comparison of a clause pattern against a pattern of the split tree.
enum class Cmp { Yes, No, Blocked };

Cmp compare(const Pattern& node, const Pattern& clause, std::vector<Var>& blockers) {
  if (clause.is<BindPat>()) return Cmp::Yes;
  if (const auto* b = node.as<BindPat>()) {
    blockers.push_back(b->var);
    return Cmp::Blocked;
  }
  const auto& nc = *node.as<ConPat>();
  const auto* cc = clause.as<ConPat>();
  if (!cc || cc->name != nc.name || cc->args.size() != nc.args.size()) return Cmp::No;
  bool blocked = false;
  for (std::size_t i = 0; i < nc.args.size(); ++i) {
    switch (compare(nc.args[i], cc->args[i], blockers)) {
      case Cmp::No:
        return Cmp::No;
      case Cmp::Blocked:
        blocked = true;
        break;
      case Cmp::Yes:
        break;
    }
  }
  return blocked ? Cmp::Blocked : Cmp::Yes;
}

Cmp compare_row(std::span<const Pattern> node, std::span<const Pattern> clause,
                std::vector<Var>& blockers) {
  bool blocked = false;
  for (std::size_t i = 0; i < node.size(); ++i) {
    switch (compare(node[i], clause[i], blockers)) {
      case Cmp::No:
        return Cmp::No;
      case Cmp::Blocked:
        blocked = true;
        break;
      case Cmp::Yes:
        break;
    }
  }
  return blocked ? Cmp::Blocked : Cmp::Yes;
}

void preorder_binds(const Pattern& p, std::vector<BindPat>& out) {
  if (const auto* b = p.as<BindPat>()) out.push_back(*b);
  if (const auto* c = p.as<ConPat>())
    for (const auto& a : c->args) preorder_binds(a, out);
}

Pattern replace_bind(const Pattern& p, const Var& target, const Pattern& with) {
  if (const auto* b = p.as<BindPat>()) return b->var == target ? with : p;
  if (const auto* c = p.as<ConPat>()) {
    std::vector<Pattern> args;
    for (const auto& a : c->args) args.push_back(replace_bind(a, target, with));
    return con_pat(c->name, std::move(args));
  }
  return p;
}

void print_case(std::ostream& os, const Pattern& p, bool nested) {
  if (p.is<BindPat>()) {
    os << '_';
    return;
  }
  const auto& c = *p.as<ConPat>();
  if (c.args.empty()) {
    os << c.name;
    return;
  }
  if (nested) os << '(';
  os << c.name;
  for (const auto& a : c.args) {
    os << ' ';
    print_case(os, a, true);
  }
  if (nested) os << ')';
}

std::string print_case(std::span<const Pattern> ps) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) os << ", ";
    print_case(os, ps[i], false);
  }
  return os.str();
}

class CoverageRun {
 public:
  CoverageRun(Evaluator& eval, const FuncDecl& f)
      : eval_(eval), f_(f), used_(f.clauses.size(), false) {}

  CoverageReport run() {
    std::vector<Pattern> root;
    for (const auto& b : f_.telescope) root.push_back(bind_pat(b.var, b.type));
    cover(root);
    CoverageReport report;
    report.leaves = leaves_;
    for (std::size_t i = 0; i < used_.size(); ++i) {
      if (used_[i]) continue;
      report.unreachable.push_back(i);
      Diagnostic d;
      d.severity = Severity::Warning;
      d.code = std::string(codes::kUnreachableClause);
      d.message = "clause " + std::to_string(i + 1) + " of " + f_.name + " is unreachable";
      d.span = f_.clauses[i].span;
      report.warnings.push_back(std::move(d));
    }
    return report;
  }

 private:
  void cover(const std::vector<Pattern>& node) {
    std::vector<Var> blockers;
    std::vector<std::size_t> blocked_rows;
    bool first_decided = false;
    for (std::size_t i = 0; i < f_.clauses.size(); ++i) {
      const auto& cl = f_.clauses[i];
      if (cl.patterns.size() != node.size()) continue;
      std::vector<Var> row_blockers;
      const Cmp c = compare_row(node, cl.patterns, row_blockers);
      if (c == Cmp::No) continue;
      if (c == Cmp::Yes && !first_decided) {
        used_[i] = true;
        ++leaves_;
        return;
      }
      first_decided = true;
      blocked_rows.push_back(i);
      blockers.insert(blockers.end(), row_blockers.begin(), row_blockers.end());
    }
    if (blockers.empty()) {
      if (!vacuous(node))
        coverage_error(codes::kMissingCase,
                       "missing case in " + f_.name + ": " + print_case(node), f_.span);
      ++leaves_;
      return;
    }
    split(node, leftmost(node, blockers), blocked_rows);
  }

  BindPat leftmost(const std::vector<Pattern>& node, const std::vector<Var>& blockers) {
    std::vector<BindPat> binds;
    for (const auto& p : node) preorder_binds(p, binds);
    for (const auto& b : binds)
      if (std::find(blockers.begin(), blockers.end(), b.var) != blockers.end()) return b;
    throw InternalError("coverage: blocking variable not in split tree");
  }

  // Some binding has a data type with no available constructor.
  bool vacuous(const std::vector<Pattern>& node) {
    std::vector<BindPat> binds;
    for (const auto& p : node) preorder_binds(p, binds);
    for (const auto& b : binds) {
      Term t = eval_.whnf(*b.type);
      const auto* d = t.as<DataCall>();
      if (!d) continue;
      auto avail = available_ctors(eval_, d->name, d->args);
      if (const auto* a = std::get_if<Available>(&avail); a && a->ctors.empty()) return true;
    }
    return false;
  }

  void split(const std::vector<Pattern>& node, const BindPat& target,
             const std::vector<std::size_t>& blocked_rows) {
    Term t = eval_.whnf(*target.type);
    const auto* d = t.as<DataCall>();
    if (!d)
      coverage_error(codes::kCannotSplit,
                     "cannot split on " + target.var.name + " of non-data type " + to_string(t),
                     f_.span);
    auto avail = available_ctors(eval_, d->name, d->args);
    if (const auto* u = std::get_if<Undecidable>(&avail))
      coverage_error(codes::kCannotSplit,
                     "cannot split on " + target.var.name + " : " + to_string(t) +
                         ": availability of constructor " + u->ctor + " is undecidable",
                     f_.span);
    const auto& ctors = std::get<Available>(avail).ctors;
    if (ctors.empty()) {
      // An empty split is what absurd clauses reaching this node assert.
      for (std::size_t i : blocked_rows)
        if (contains_impossible(f_.clauses[i].patterns)) used_[i] = true;
      ++leaves_;
      return;
    }
    for (const auto& ctor : ctors) {
      auto fields = instantiate_fields(eval_, ctor, d->args);
      if (!fields) throw InternalError("coverage: available constructor without fields");
      std::vector<Pattern> args;
      std::vector<Term> vars;
      for (const auto& b : *fields) {
        args.push_back(bind_pat(b.var, b.type));
        vars.push_back(var_call(b.var));
      }
      const Pattern with = con_pat(ctor, std::move(args));
      const Substitution s{{{target.var, con_call(ctor, std::move(vars))}}};
      std::vector<Pattern> child;
      for (const auto& p : node) child.push_back(subst(replace_bind(p, target.var, with), s));
      cover(child);
    }
  }

  Evaluator& eval_;
  const FuncDecl& f_;
  std::vector<bool> used_;
  std::size_t leaves_ = 0;
};

}  // namespace

Availability available_ctors(Evaluator& eval, const std::string& data,
                             std::span<const Term> indices) {
  const DataDecl* d = eval.signature().find_data(data);
  if (!d) {
    Diagnostic diag;
    diag.code = std::string(codes::kUnknownHead);
    diag.message = "unknown data type " + data;
    throw TypeError(std::move(diag));
  }
  Available out;
  for (const auto& row : d->ctors) {
    if (!row.patterns) {
      out.ctors.push_back(row.name);
      continue;
    }
    auto outcome = eval.match(indices, *row.patterns);
    if (const auto* s = std::get_if<Stuck>(&outcome)) return Undecidable{row.name, s->position};
    if (std::holds_alternative<Matched>(outcome)) out.ctors.push_back(row.name);
  }
  return out;
}

std::optional<Telescope> instantiate_fields(Evaluator& eval, const std::string& ctor,
                                            std::span<const Term> indices) {
  auto ref = eval.signature().find_ctor(ctor);
  if (!ref) throw InternalError("instantiate_fields: unknown constructor " + ctor);
  Substitution by_index;
  for (std::size_t i = 0; i < ref->data->telescope.size() && i < indices.size(); ++i)
    by_index.entries.emplace_back(ref->data->telescope[i].var, indices[i]);
  if (!ref->row->patterns) return freshen(subst(ref->row->fields, by_index));
  auto outcome = eval.match(indices, *ref->row->patterns);
  if (auto* m = std::get_if<Matched>(&outcome))
    return freshen(subst(subst(ref->row->fields, m->subst), by_index));
  if (std::holds_alternative<Mismatch>(outcome)) return std::nullopt;
  throw InternalError("instantiate_fields: availability of " + ctor + " is undecidable");
}

CoverageReport check_coverage(Evaluator& eval, const FuncDecl& f) {
  return CoverageRun(eval, f).run();
}

}  // namespace sit

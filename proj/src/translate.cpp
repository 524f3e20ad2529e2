#include "sit/translate.hpp"

#include <sstream>

#include "sit/pattern_ops.hpp"

namespace sit {

namespace {

Term pi_chain(const Telescope& tele, Term codomain) {
  for (auto it = tele.rbegin(); it != tele.rend(); ++it) codomain = pi(it->var, it->type, codomain);
  return codomain;
}

Term ctor_type(const DataDecl& data, const CtorRow& row) {
  const CtorRow full = row.patterns ? row : as_pattern_row(data, row);
  Telescope binders = vars_pats(*full.patterns);
  binders.insert(binders.end(), full.fields.begin(), full.fields.end());
  return pi_chain(binders, data_call(data.name, to_terms(*full.patterns)));
}

// Every binder is written out, dependent or not.
void emit_type(std::ostream& os, const Term& t) {
  const PrintOptions unicode{true};
  Term cur = t;
  while (const auto* p = cur.as<Pi>()) {
    os << '(' << p->binder.name << " : " << to_string(p->domain, unicode) << ") → ";
    cur = p->codomain;
  }
  os << to_string(cur, unicode);
}

}  // namespace

CtorRow as_pattern_row(const DataDecl& data, const CtorRow& row) {
  if (row.patterns) return row;
  CtorRow out = row;
  std::vector<Pattern> ps;
  for (const auto& b : data.telescope) ps.push_back(bind_pat(b.var, b.type));
  out.patterns = std::move(ps);
  return out;
}

GeneralData to_general(const DataDecl& data) {
  GeneralData g{data.name, data.telescope, {}};
  for (const auto& row : data.ctors) g.ctors.emplace_back(row.name, ctor_type(data, row));
  return g;
}

Term synth_ctor_type(const Signature& sig, const std::string& ctor) {
  auto ref = sig.find_ctor(ctor);
  if (!ref) {
    Diagnostic d;
    d.code = std::string(codes::kUnknownHead);
    d.message = "unknown constructor " + ctor;
    throw TypeError(std::move(d));
  }
  return ctor_type(*ref->data, *ref->row);
}

std::string emit_general(const GeneralData& g) {
  std::ostringstream os;
  os << "data " << g.name << " : ";
  Term header = univ();
  for (auto it = g.indices.rbegin(); it != g.indices.rend(); ++it)
    header = pi(it->var, it->type, header);
  emit_type(os, header);
  os << " where\n";
  for (const auto& [name, type] : g.ctors) {
    os << "  " << name << " : ";
    emit_type(os, type);
    os << '\n';
  }
  return os.str();
}

}  // namespace sit

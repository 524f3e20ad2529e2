#include <sstream>

#include "sit/frontend.hpp"

namespace sit::surface {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool same(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return same_shape(*a, *b);
}

bool same(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

bool same(const Pat& a, const Pat& b) {
  if (a.impossible != b.impossible || a.name != b.name || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same(a.args[i], b.args[i])) return false;
  return true;
}

bool same(const std::vector<Pat>& a, const std::vector<Pat>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

bool same(const std::vector<TeleEntry>& a, const std::vector<TeleEntry>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].names != b[i].names || !same(a[i].type, b[i].type)) return false;
  return true;
}

bool same(const Decl& a, const Decl& b) {
  if (a.index() != b.index()) return false;
  if (const auto* da = std::get_if<DataDecl>(&a)) {
    const auto& db = std::get<DataDecl>(b);
    if (da->name != db.name || !same(da->telescope, db.telescope) ||
        da->rows.size() != db.rows.size())
      return false;
    for (std::size_t i = 0; i < da->rows.size(); ++i) {
      const auto& ra = da->rows[i];
      const auto& rb = db.rows[i];
      if (ra.name != rb.name || ra.patterns.has_value() != rb.patterns.has_value()) return false;
      if (ra.patterns && !same(*ra.patterns, *rb.patterns)) return false;
      if (!same(ra.fields, rb.fields)) return false;
    }
    return true;
  }
  const auto& fa = std::get<DefDecl>(a);
  const auto& fb = std::get<DefDecl>(b);
  if (fa.name != fb.name || !same(fa.telescope, fb.telescope) || !same(fa.result, fb.result) ||
      fa.clauses.size() != fb.clauses.size())
    return false;
  for (std::size_t i = 0; i < fa.clauses.size(); ++i)
    if (!same(fa.clauses[i].patterns, fb.clauses[i].patterns) ||
        !same(fa.clauses[i].body, fb.clauses[i].body))
      return false;
  return true;
}

// 0: anything, 1: left of an arrow, 2: argument position
void print(std::ostream& os, const Expr& e, int prec) {
  std::visit(overloaded{
                 [&](const Ident& i) { os << i.name; },
                 [&](const TypeLit&) { os << "Type"; },
                 [&](const Apply& a) {
                   if (prec >= 2) os << '(';
                   print(os, *a.head, 2);
                   for (const auto& x : a.args) {
                     os << ' ';
                     print(os, *x, 2);
                   }
                   if (prec >= 2) os << ')';
                 },
                 [&](const PiType& p) {
                   if (prec >= 1) os << '(';
                   if (p.names.empty()) {
                     print(os, *p.domain, 1);
                   } else {
                     os << '(';
                     for (std::size_t i = 0; i < p.names.size(); ++i)
                       os << (i ? " " : "") << p.names[i];
                     os << " : ";
                     print(os, *p.domain, 0);
                     os << ')';
                   }
                   os << " -> ";
                   print(os, *p.codomain, 0);
                   if (prec >= 1) os << ')';
                 },
                 [&](const Lambda& l) {
                   if (prec >= 1) os << '(';
                   os << "fn " << l.name << " => ";
                   print(os, *l.body, 0);
                   if (prec >= 1) os << ')';
                 },
             },
             e.node);
}

void print(std::ostream& os, const Pat& p, bool nested) {
  if (p.impossible) {
    os << "impossible";
    return;
  }
  if (p.args.empty()) {
    os << p.name;
    return;
  }
  if (nested) os << '(';
  os << p.name;
  for (const auto& a : p.args) {
    os << ' ';
    print(os, a, true);
  }
  if (nested) os << ')';
}

void print(std::ostream& os, const std::vector<Pat>& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) os << ", ";
    print(os, ps[i], false);
  }
}

void print(std::ostream& os, const std::vector<TeleEntry>& tele) {
  for (const auto& e : tele) {
    os << " (";
    for (std::size_t i = 0; i < e.names.size(); ++i) os << (i ? " " : "") << e.names[i];
    os << " : ";
    print(os, *e.type, 0);
    os << ')';
  }
}

}  // namespace

bool same_shape(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(overloaded{
                        [&](const Ident& x) { return x.name == std::get<Ident>(b.node).name; },
                        [](const TypeLit&) { return true; },
                        [&](const Apply& x) {
                          const auto& y = std::get<Apply>(b.node);
                          return same(x.head, y.head) && same(x.args, y.args);
                        },
                        [&](const PiType& x) {
                          const auto& y = std::get<PiType>(b.node);
                          return x.names == y.names && same(x.domain, y.domain) &&
                                 same(x.codomain, y.codomain);
                        },
                        [&](const Lambda& x) {
                          const auto& y = std::get<Lambda>(b.node);
                          return x.name == y.name && same(x.body, y.body);
                        },
                    },
                    a.node);
}

bool same_shape(const File& a, const File& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!same(a.decls[i], b.decls[i])) return false;
  return true;
}

std::string print(const Expr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::string print(const File& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.decls.size(); ++i) {
    if (i) os << '\n';
    if (const auto* d = std::get_if<DataDecl>(&f.decls[i])) {
      os << "data " << d->name;
      print(os, d->telescope);
      os << " : Type\n";
      for (const auto& row : d->rows) {
        os << "  | ";
        if (row.patterns) {
          print(os, *row.patterns);
          os << " => ";
        }
        os << row.name;
        print(os, row.fields);
        os << '\n';
      }
    } else {
      const auto& fn = std::get<DefDecl>(f.decls[i]);
      os << "def " << fn.name;
      print(os, fn.telescope);
      os << " : ";
      print(os, *fn.result, 0);
      os << '\n';
      for (const auto& cl : fn.clauses) {
        os << "  | ";
        print(os, cl.patterns);
        if (cl.body) {
          os << " => ";
          print(os, *cl.body, 0);
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace sit::surface

#include <doctest.h>

#include <filesystem>
#include <functional>
#include <string>

#include "sit/pattern_ops.hpp"
#include "sit/translate.hpp"
#include "sit/typecheck.hpp"
#include "support.hpp"

using namespace sit;
using sit::test::load_corpus;
using sit::test::load_text;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const DiagnosticError& e) {
    return e.code();
  }
  return "ok";
}

}  // namespace

TEST_CASE("check_term: examples") {
  auto p = load_corpus("fin.sit");
  auto v = load_corpus("vec.sit");
  TypeChecker tc(v->sig(), *v->eval);
  CHECK(error_code([&] { tc.check_term({}, v->term("vnil"), v->term("Vec Nat zero")); }) == "ok");
  CHECK(error_code([&] { tc.check_term({}, v->term("vnil"), v->term("Vec Nat (suc zero)")); }) ==
        "E107");
  CHECK(error_code([&] {
          tc.check_term({}, v->term("vcons zero vnil"), v->term("Vec Nat (suc zero)"));
        }) == "ok");
  // the field xs is checked at Vec Nat zero
  CHECK(error_code([&] {
          tc.check_term({}, v->term("vcons zero (vcons zero vnil)"), v->term("Vec Nat (suc zero)"));
        }) == "E107");

  TypeChecker tf(p->sig(), *p->eval);
  const Var k = fresh_var("k");
  const Context ctx = Context{}.extend(k, p->term("Nat"));
  CHECK(error_code([&] { tf.check_term(ctx, p->term("fzero"), p->term("Fin k", {k})); }) == "E108");
}

TEST_CASE("check_term: functions, lambdas and the universe") {
  auto p = load_corpus("nat.sit");
  TypeChecker tc(p->sig(), *p->eval);
  CHECK(error_code([&] { tc.check_term({}, p->term("plus zero"), p->term("Nat -> Nat")); }) == "ok");
  CHECK(error_code([&] { tc.check_term({}, p->term("suc"), p->term("Nat -> Nat")); }) == "ok");
  CHECK(error_code([&] { tc.check_term({}, p->term("Type"), p->term("Type")); }) == "ok");
  CHECK(error_code([&] { tc.check_term({}, p->term("(n : Nat) -> Nat"), p->term("Type")); }) == "ok");
  CHECK(error_code([&] { tc.check_term({}, p->term("fn x => x"), p->term("Nat")); }) == "E104");
  CHECK(error_code([&] { tc.check_term({}, p->term("plus zero zero"), p->term("Type")); }) == "E100");
  CHECK(error_code([&] { tc.check_term({}, p->term("Nat"), p->term("Nat")); }) == "E100");
  CHECK(error_code([&] { tc.check_term({}, p->term("fn x => x"), univ()); }) == "E104");
  CHECK(error_code([&] { tc.infer({}, p->term("fn x => x")); }) == "E114");
  CHECK(error_code([&] { tc.infer({}, var_call(fresh_var("ghost"))); }) == "E103");
  CHECK(error_code([&] { tc.infer({}, fn_call("nope", {})); }) == "E102");
  CHECK(error_code([&] { tc.infer({}, fn_call("plus", {p->term("zero")})); }) == "E101");
}

TEST_CASE("check_args: examples") {
  auto v = load_corpus("vec.sit");
  TypeChecker tc(v->sig(), *v->eval);
  const Telescope& vec = v->data("Vec").telescope;
  CHECK(error_code([&] { tc.check_args({}, std::vector<Term>{}, Telescope{}); }) == "ok");
  CHECK(error_code([&] {
          tc.check_args({}, std::vector<Term>{v->term("Nat"), v->term("zero")}, vec);
        }) == "ok");
  try {
    tc.check_args({}, std::vector<Term>{v->term("zero"), v->term("Nat")}, vec);
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.diagnostic().message.rfind("argument 0", 0) == 0);
  }
  CHECK(error_code([&] { tc.check_args({}, std::vector<Term>{v->term("Nat")}, vec); }) == "E101");
}

TEST_CASE("check_pattern: examples") {
  auto p = load_corpus("fin.sit");
  TypeChecker tc(p->sig(), *p->eval);
  const Var n = fresh_var("n");
  const Context ctx = Context{}.extend(n, p->term("Nat"));
  auto r = tc.check_pattern(ctx, con_pat("fzero"), p->term("Fin (suc n)", {n}));
  CHECK(r.bindings.empty());
  auto r2 = tc.check_pattern({}, impossible_pat(), p->term("Fin zero"));
  CHECK(r2.bindings.empty());
  CHECK(error_code([&] {
          tc.check_pattern(ctx, impossible_pat(), p->term("Fin (suc n)", {n}));
        }) == "E109");
  CHECK(error_code([&] { tc.check_pattern(ctx, impossible_pat(), p->term("Fin n", {n})); }) ==
        "E110");
  CHECK(error_code([&] { tc.check_pattern(ctx, con_pat("fzero"), p->term("Fin n", {n})); }) ==
        "E108");
  CHECK(error_code([&] { tc.check_pattern(ctx, con_pat("fzero"), p->term("Fin zero")); }) ==
        "E107");
  CHECK(error_code([&] { tc.check_pattern(ctx, con_pat("zero"), p->term("Fin (suc n)", {n})); }) ==
        "E106");
  CHECK(error_code([&] { tc.check_pattern(ctx, con_pat("zero"), p->term("Nat -> Nat")); }) ==
        "E105");
  // the field of fsuc is checked at Fin n
  const Var y = fresh_var("y");
  auto r3 = tc.check_pattern(ctx, con_pat("fsuc", {bind_pat(y)}), p->term("Fin (suc n)", {n}));
  REQUIRE(r3.bindings.size() == 1);
  CHECK(p->eval->convertible(r3.bindings[0].type, p->term("Fin n", {n})));
}

TEST_CASE("check_patterns: examples") {
  auto p = load_corpus("fin.sit");
  TypeChecker tc(p->sig(), *p->eval);
  const Telescope& tele = p->func("toNat").telescope;
  const Var m = fresh_var("m");
  auto r = tc.check_patterns({}, std::vector<Pattern>{con_pat("suc", {bind_pat(m)}), con_pat("fzero")},
                             tele);
  REQUIRE(r.bindings.size() == 1);
  CHECK(r.bindings[0].var == m);
  CHECK(to_string(r.bindings[0].type) == "Nat");
  CHECK(tc.check_patterns({}, std::vector<Pattern>{}, Telescope{}).bindings.empty());

  auto v = load_corpus("vec.sit");
  TypeChecker tv(v->sig(), *v->eval);
  const Var a = fresh_var("A"), m1 = fresh_var("m"), x = fresh_var("x"), m2 = fresh_var("m");
  const Telescope four{{fresh_var("A"), univ()},
                       {fresh_var("n"), v->term("Nat")},
                       {fresh_var("x"), v->term("Nat")},
                       {fresh_var("xs"), v->term("Nat")}};
  CHECK(error_code([&] {
          tv.check_patterns({}, std::vector<Pattern>{bind_pat(a), con_pat("suc", {bind_pat(m1)}),
                                                     bind_pat(x), bind_pat(m2)},
                            four);
        }) == "E111");
}

TEST_CASE("check_patterns: bindings after an impossible pattern") {
  auto p = load_text(R"(
data Nat : Type
  | zero
  | suc (n : Nat)

data Fin (n : Nat) : Type
  | suc m => fzero
  | suc m => fsuc (x : Fin m)

def f (x : Fin zero) (y : Nat) : Nat
  | impossible, y
)");
  CHECK(p->func("f").clauses.size() == 1);
}

TEST_CASE("check_clause: examples") {
  auto p = load_corpus("normalize.sit");
  TypeChecker tc(p->sig(), *p->eval);
  const auto& norm = p->func("normalize");
  const auto& raw = std::get<FuncDecl>(p->resolved.decls.back());
  CHECK(error_code([&] { tc.check_clause({}, norm.telescope, norm.result, raw.clauses[0]); }) ==
        "ok");

  auto f = load_corpus("fin.sit");
  TypeChecker tf(f->sig(), *f->eval);
  const Telescope tele{{fresh_var("A"), univ()}, {fresh_var("x"), f->term("Fin zero")}};
  const Clause absurd{{bind_pat(fresh_var("A")), impossible_pat()}, std::nullopt, {}};
  CHECK(error_code([&] { tf.check_clause({}, tele, f->term("Nat"), absurd); }) == "ok");
  const Clause with_body{{bind_pat(fresh_var("A")), impossible_pat()}, f->term("zero"), {}};
  CHECK(error_code([&] { tf.check_clause({}, tele, f->term("Nat"), with_body); }) == "E112");
  const Clause no_body{{bind_pat(fresh_var("A")), bind_pat(fresh_var("y"))}, std::nullopt, {}};
  CHECK(error_code([&] { tf.check_clause({}, tele, f->term("Nat"), no_body); }) == "E113");

  auto b = load_corpus("normalize.sit");
  TypeChecker tb(b->sig(), *b->eval);
  const Telescope one{{fresh_var("n"), b->term("Nat")}};
  const Clause bad{{con_pat("zero")}, b->term("true"), {}};
  // a constructor of the wrong data type gets its own mismatch code
  CHECK(error_code([&] { tb.check_clause({}, one, b->term("Nat"), bad); }) == "E106");
  const Clause bad2{{con_pat("zero")}, b->term("not true"), {}};
  CHECK(error_code([&] { tb.check_clause({}, one, b->term("Nat"), bad2); }) == "E100");
}

TEST_CASE("check_ctor_row: examples") {
  auto v = load_corpus("vec.sit");
  TypeChecker tv(v->sig(), *v->eval);
  const auto& raw_vec = std::get<DataDecl>(v->resolved.decls[2]);
  CHECK(error_code([&] { tv.check_ctor_row({}, raw_vec, raw_vec.ctors[1]); }) == "ok");

  auto l = load_corpus("list.sit");
  TypeChecker tl(l->sig(), *l->eval);
  const auto& raw_list = std::get<DataDecl>(l->resolved.decls[0]);
  CHECK(error_code([&] { tl.check_ctor_row({}, raw_list, raw_list.ctors[1]); }) == "ok");

  const CtorRow bad{std::vector<Pattern>{bind_pat(fresh_var("A")), con_pat("zero")}, "bad",
                    Telescope{{fresh_var("x"), var_call(fresh_var("m"))}}, {}};
  CHECK(error_code([&] { tv.check_ctor_row({}, raw_vec, bad); }) == "E103");
}

TEST_CASE("check_signature: examples") {
  for (const auto& f : test::corpus_files()) {
    CAPTURE(f);
    CHECK_NOTHROW(load_corpus(f));
  }
  CHECK(error_code([] {
          load_text(R"(
data Vec (A : Type) (n : Nat) : Type
  | A, zero => vnil
data Nat : Type
  | zero
)");
        }) == "E003");
  // The same ordering error at the core level, bypassing the resolver.
  auto v = load_corpus("vec.sit");
  std::vector<Declaration> decls{v->resolved.decls[2], v->resolved.decls[0]};
  CHECK(error_code([&] { check_signature(decls); }) == "E102");
  std::vector<Declaration> dup{v->resolved.decls[0], v->resolved.decls[0]};
  CHECK(error_code([&] { check_signature(dup); }) == "E115");
}

TEST_CASE("strict field-scope check warns on pattern-row fields") {
  CheckOptions opts;
  opts.strict_fig6 = true;
  auto v = load_corpus("vec.sit", opts);
  bool warned = false;
  for (const auto& w : v->checked.warnings) warned |= w.code == "W300";
  CHECK(warned);
  auto plain = load_corpus("vec.sit");
  for (const auto& w : plain->checked.warnings) CHECK(w.code != "W300");
}

TEST_CASE("typed-pats lemma over corpus rows and clauses") {
  int rows = 0;
  for (const auto& f : test::corpus_files()) {
    auto p = load_corpus(f);
    TypeChecker tc(p->sig(), *p->eval);
    auto lemma = [&](const std::vector<Pattern>& ps, const Telescope& tele) {
      if (contains_impossible(ps)) return;
      const Context ctx = Context{}.extend(vars_pats(ps));
      CHECK(error_code([&] { tc.check_args(ctx, to_terms(ps), tele); }) == "ok");
      ++rows;
    };
    for (const auto& d : p->sig().decls()) {
      if (const auto* data = std::get_if<DataDecl>(&d)) {
        for (const auto& r : data->ctors)
          if (r.patterns) lemma(*r.patterns, data->telescope);
      } else {
        const auto& fn = std::get<FuncDecl>(d);
        for (const auto& c : fn.clauses) lemma(c.patterns, fn.telescope);
      }
    }
  }
  CHECK(rows > 20);
}

TEST_CASE("plain rows and their pattern-row form accept the same terms") {
  for (const auto& f : test::corpus_files()) {
    CAPTURE(f);
    auto p = load_corpus(f);
    std::vector<Declaration> converted;
    for (const auto& d : p->resolved.decls) {
      if (const auto* data = std::get_if<DataDecl>(&d)) {
        DataDecl c = *data;
        for (auto& r : c.ctors) r = as_pattern_row(*data, r);
        converted.emplace_back(std::move(c));
      } else {
        converted.push_back(d);
      }
    }
    CheckedProgram q = check_signature(converted);
    Evaluator qe(q.signature);
    TypeChecker ta(p->sig(), *p->eval);
    TypeChecker tb(q.signature, qe);
    test::Enumerator en(*p->eval);
    // Every value of one closed data type checked against every closed
    // data type, accepted or rejected alike by both signatures.
    const auto types = en.values(univ(), 2);
    for (const auto& t : types) {
      for (const auto& val : en.values(t, 3)) {
        for (const auto& target : types) {
          const std::string a = error_code([&] { ta.check_term({}, val, target); });
          const std::string b = error_code([&] { tb.check_term({}, val, target); });
          CHECK(a == b);
        }
      }
    }
  }
}

TEST_CASE("checking is deterministic") {
  for (const auto& e : std::filesystem::directory_iterator(test::fixture_dir() + "/negative")) {
    const std::string text = test::read_text(e.path().string());
    auto once = error_code([&] { load_text(text); });
    auto twice = error_code([&] { load_text(text); });
    CAPTURE(e.path().string());
    CHECK(once == twice);
    CHECK(once != "ok");
  }
}

TEST_CASE("subject reduction on the normalizer") {
  auto p = load_corpus("normalize.sit");
  TypeChecker tc(p->sig(), *p->eval);
  test::Enumerator en(*p->eval);
  const auto& norm = p->func("normalize");
  int n = 0;
  for (const auto& args : en.tuples(norm.telescope, 5, 200)) {
    const Term u = fn_call("normalize", args);
    const Term a = fn_call("termTy", {args[0]});
    CHECK(error_code([&] { tc.check_term({}, u, a); }) == "ok");
    CHECK(error_code([&] { tc.check_term({}, p->eval->normalize(u), a); }) == "ok");
    ++n;
  }
  CHECK(n > 50);
}

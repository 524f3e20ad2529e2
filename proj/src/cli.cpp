#include "sit/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sit/frontend.hpp"
#include "sit/translate.hpp"
#include "sit/typecheck.hpp"

namespace sit::cli {

namespace {

struct Options {
  std::uint64_t fuel = kDefaultFuel;
  bool trace = false;
  std::string file;
  bool no_coverage = false;
  bool strict_fig6 = false;
  std::string expr;
  std::string output;
  std::string ctor;
};

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_for(const Diagnostic& d) {
  switch (d.diag_class()) {
    case DiagClass::Parse: return kParseError;
    case DiagClass::Fuel: return kFuel;
    case DiagClass::Type: break;
  }
  return kTypeError;
}

struct Loaded {
  ResolvedProgram program;
  CheckedProgram checked;
};

Loaded load(const Options& o, std::ostream& err) {
  const std::string text = read_file(o.file);
  ResolvedProgram program = resolve(parse_file(text, o.file));
  CheckOptions copts;
  copts.coverage = !o.no_coverage;
  copts.strict_fig6 = o.strict_fig6;
  copts.eval.fuel = o.fuel;
  if (o.trace) copts.eval.trace = &err;
  CheckedProgram checked = check_signature(program.decls, copts);
  for (const auto& w : checked.warnings) err << w.format() << '\n';
  return Loaded{std::move(program), std::move(checked)};
}

int cmd_check(const Options& o, std::ostream& err) {
  load(o, err);
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load(o, err);
  const Term t = resolve_expr(l.program.globals, *parse_expr(o.expr, "<expr>"));
  EvalOptions eopts;
  eopts.fuel = o.fuel;
  if (o.trace) eopts.trace = &err;
  Evaluator eval(l.checked.signature, eopts);
  TypeChecker checker(l.checked.signature, eval);
  checker.set_span(SourceSpan{"<expr>", 1, 1, 1, 1});
  try {
    checker.infer(Context{}, t);
    out << to_string(eval.normalize(t)) << '\n';
  } catch (const FuelExhausted& e) {
    Diagnostic d = e.diagnostic();
    d.span = SourceSpan{"<expr>", 1, 1, 1, static_cast<int>(o.expr.size()) + 1};
    throw FuelExhausted(std::move(d));
  }
  return kOk;
}

int cmd_translate(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load(o, err);
  std::ostringstream text;
  bool first = true;
  for (const auto& d : l.checked.signature.decls()) {
    const auto* data = std::get_if<DataDecl>(&d);
    if (!data) continue;
    if (!first) text << '\n';
    first = false;
    text << emit_general(to_general(*data));
  }
  if (o.output.empty()) {
    out << text.str();
    return kOk;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw UsageError{"cannot write " + o.output};
  file << text.str();
  return kOk;
}

int cmd_ctor_type(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load(o, err);
  out << to_string(synth_ctor_type(l.checked.signature, o.ctor), PrintOptions{true}) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Checker for inductive families with constructor patterns", "sitc"};
  app.require_subcommand(1);
  app.add_option("--fuel", o.fuel, "Reduction step limit")->check(CLI::PositiveNumber);
  app.add_flag("--trace-match", o.trace, "Log every match with its outcome");

  auto* check = app.add_subcommand("check", "Type-check and coverage-check a file")->fallthrough();
  check->add_option("file", o.file)->required();
  check->add_flag("--no-coverage", o.no_coverage, "Skip coverage checking");
  check->add_flag("--strict-fig6", o.strict_fig6,
                  "Warn when pattern-row fields need the pattern bindings");

  auto* eval = app.add_subcommand("eval", "Normalize an expression in a checked file")->fallthrough();
  eval->add_option("file", o.file)->required();
  eval->add_option("-e,--expr", o.expr, "Expression to normalize")->required();

  auto* translate =
      app.add_subcommand("translate", "Print data types as general indexed types")->fallthrough();
  translate->add_option("file", o.file)->required();
  translate->add_option("-o,--output", o.output, "Write to a file instead of stdout");

  auto* ctor_type =
      app.add_subcommand("ctor-type", "Print the full type of a constructor")->fallthrough();
  ctor_type->add_option("file", o.file)->required();
  ctor_type->add_option("ctor", o.ctor)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, err);
    if (eval->parsed()) return cmd_eval(o, out, err);
    if (translate->parsed()) return cmd_translate(o, out, err);
    return cmd_ctor_type(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.message << '\n';
    return kUsage;
  } catch (const DiagnosticError& e) {
    err << e.diagnostic().format() << '\n';
    return exit_for(e.diagnostic());
  }
}

}  // namespace sit::cli

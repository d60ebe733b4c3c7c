#include <doctest.h>

#include "helpers.hpp"
#include "popstar/parse.hpp"

using namespace popstar;

namespace {
bool same_trs(const Trs& a, const Trs& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (size_t i = 0; i < a.rules.size(); ++i) {
    if (to_string(a.rules[i].lhs, a.signature) != to_string(b.rules[i].lhs, b.signature))
      return false;
    if (to_string(a.rules[i].rhs, a.signature) != to_string(b.rules[i].rhs, b.signature))
      return false;
  }
  for (size_t i = 0; i < a.signature.size(); ++i) {
    const Symbol& sym = a.signature.at(static_cast<SymbolId>(i));
    if (!b.signature.contains(sym.name)) return false;
    SymbolId g = b.signature.id(sym.name);
    if (b.signature.arity(g) != sym.arity) return false;
    if (b.signature.is_defined(g) != (sym.kind == SymbolKind::Defined)) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("minimal tpdb file") {
  Trs t = parse_tpdb("(VAR x)(RULES f(x) -> x)");
  CHECK(t.rules.size() == 1);
  CHECK(t.signature.is_defined(t.signature.id("f")));
  CHECK(t.signature.arity(t.signature.id("f")) == 1);
}

TEST_CASE("R_mul source") {
  const Trs& t = test::corpus_entry("R_mul").trs;
  CHECK(t.rules.size() == 4);
  CHECK(t.signature.is_defined(t.signature.id("plus")));
  CHECK(t.signature.is_defined(t.signature.id("times")));
  CHECK(t.signature.is_constructor(t.signature.id("0")));
  CHECK(t.signature.is_constructor(t.signature.id("s")));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_tpdb("(VAR x)\n(RULES x -> x)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_tpdb("(VAR x)(RULES f(x) -> f(x,x))"), ParseError);  // arity clash
  CHECK_THROWS_AS(parse_tpdb("(FOO)(RULES a -> a)"), ParseError);  // unknown section
  CHECK_THROWS_AS(parse_tpdb("(VAR x)(RULES f(x) -> g(x; x))"), ParseError);  // ';' in tpdb
}

TEST_CASE("comment and strategy sections are skipped") {
  Trs t = parse_tpdb(
      "(COMMENT anything (even nested (parens)))\n(VAR x)\n(STRATEGY INNERMOST)\n"
      "(RULES f(x) -> x)");
  CHECK(t.rules.size() == 1);
}

TEST_CASE("print/parse round trip over the corpus") {
  for (const CorpusEntry& e : bundled_corpus()) {
    Trs parsed = parse_problem(e.source).trs;
    Trs reparsed = parse_tpdb(print_tpdb(parsed));
    CHECK_MESSAGE(same_trs(parsed, reparsed), "round trip failed for ", e.id);
  }
}

TEST_CASE("native format declares safe mappings") {
  ParsedProblem p = parse_native(
      "(VAR x y)\n(RULES\n  plus(s(;x);y) -> s(;plus(x;y))\n  plus(0;y) -> y\n)");
  REQUIRE(p.safe_mapping.has_value());
  const Signature& sig = p.trs.signature;
  SymbolId plus = sig.id("plus");
  CHECK(p.safe_mapping->is_safe(sig, plus, 2));
  CHECK_FALSE(p.safe_mapping->is_safe(sig, plus, 1));
  // constructors are implicitly all-safe
  CHECK(p.safe_mapping->is_safe(sig, sig.id("s"), 1));
}

TEST_CASE("native round trip") {
  const char* src =
      "(VAR x y)\n(RULES\n  times(x,y;) -> plus(y;times(x,y;))\n  plus(0;y) -> y\n)";
  ParsedProblem p = parse_native(src);
  std::string printed = print_native(p.trs, *p.safe_mapping);
  ParsedProblem again = parse_native(printed);
  CHECK(same_trs(p.trs, again.trs));
  const Signature& sig = again.trs.signature;
  CHECK(again.safe_mapping->safe_set(sig, sig.id("plus")) == std::set<int>{2});
  CHECK(again.safe_mapping->safe_set(sig, sig.id("times")).empty());
}

TEST_CASE("defined block overrides kind inference") {
  ParsedProblem p = parse_native("(VAR x)(DEFINED f g)(RULES f(x;) -> g(x;))");
  CHECK(p.trs.signature.is_defined(p.trs.signature.id("g")));
  CHECK(p.format == ProblemFormat::NativeAnnotated);
}

TEST_CASE("inconsistent annotations are rejected") {
  CHECK_THROWS_AS(
      parse_native("(VAR x y)(RULES f(x;y) -> x f(x,y;) -> y)"), ParseError);
}

TEST_CASE("format autodetection") {
  CHECK(parse_problem("(VAR x)(RULES f(x) -> x)").format == ProblemFormat::TpdbTrs);
  CHECK(parse_problem("(VAR x)(RULES f(x;) -> x)").format ==
        ProblemFormat::NativeAnnotated);
}

TEST_CASE("certificate files") {
  const Trs& t = test::corpus_entry("R_mul").trs;
  Certificate c = parse_certificate(
      "# multiplication\nrank times 2\nrank plus 1\nsafe plus 2\nsafe times\n",
      t.signature, OrderKind::Pop);
  CHECK(c.precedence.rank(t.signature.id("times")) == 2);
  CHECK(c.safe_mapping.safe_set(t.signature, t.signature.id("plus")) ==
        std::set<int>{2});
  CHECK(c.safe_mapping.safe_set(t.signature, t.signature.id("times")).empty());

  std::string printed = print_certificate(c, t.signature);
  Certificate c2 = parse_certificate(printed, t.signature, OrderKind::Pop);
  CHECK(c2.precedence.ranks() == c.precedence.ranks());

  CHECK_THROWS_AS(parse_certificate("rank s 1", t.signature, OrderKind::Pop),
                  ParseError);
  CHECK_THROWS_AS(parse_certificate("safe plus 7", t.signature, OrderKind::Pop),
                  ParseError);
  CHECK_THROWS_AS(parse_certificate("rank nosuch 1", t.signature, OrderKind::Pop),
                  ParseError);
}

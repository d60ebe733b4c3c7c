#include <doctest.h>

#include "helpers.hpp"
#include "popstar/parse.hpp"
#include "popstar/seqorder.hpp"
#include "popstar/seqterm.hpp"

using namespace popstar;

namespace {

// The two-rule system with auxiliary defined symbols used throughout the
// sequence-order examples: f recurses on its first argument and calls g on a
// computed normal argument.
struct RfFixture {
  ParsedProblem p = parse_native(
      "(VAR x y)\n(RULES\n"
      "  f(0;y) -> y\n"
      "  f(s(;x);y) -> g(h(x;);f(x;y))\n"
      "  g(x;y) -> y\n"
      "  h(x;) -> 0\n)");
  Trs& trs = p.trs;
  Certificate cert;

  RfFixture() {
    cert.order_kind = OrderKind::Pop;
    cert.precedence.set_rank(trs.signature.id("f"), 2);
    cert.precedence.set_rank(trs.signature.id("g"), 1);
    cert.precedence.set_rank(trs.signature.id("h"), 1);
    cert.safe_mapping = *p.safe_mapping;
  }

  Term num(int n) {
    Term t = Term::app(trs.signature.id("0"));
    for (int i = 0; i < n; ++i) t = Term::app(trs.signature.id("s"), {t});
    return t;
  }
};

}  // namespace

TEST_CASE("norm") {
  const CorpusEntry& mul = test::corpus_entry("R_mul");
  const Signature& sig = mul.trs.signature;
  const SafeMapping& sm = mul.paper_cert->safe_mapping;
  SymbolId times = sig.id("times"), plus = sig.id("plus"), s = sig.id("s"),
           z = sig.id("0");
  auto num = [&](int n) {
    Term t = Term::app(z);
    for (int i = 0; i < n; ++i) t = Term::app(s, {t});
    return t;
  };

  // all arguments of times are normal: the max over safe positions is empty
  CHECK(norm(Term::app(times, {num(1), num(1)}), sig, sm) == 1);
  // plus is safe in its second position
  CHECK(norm(Term::app(plus, {num(1), num(2)}), sig, sm) == 4);
  // norm and depth coincide on values
  test::TermGen gen(sig, 41);
  for (int i = 0; i < 100; ++i) {
    Term v = gen.value(4);
    CHECK(norm(v, sig, sm) == v.depth());
  }
}

TEST_CASE("tally, width, length, concatenation") {
  NormSignature ns;
  int f = ns.add("f", 1, 1);
  ns.add_star(-1);

  CHECK(seq_len(tally(0, ns)) == 0);
  CHECK(seq_width(tally(0, ns)) == 0);
  CHECK(tally(1, ns).items().size() == 1);
  CHECK(tally(3, ns).items().size() == 3);

  SeqTerm a = SeqTerm::app(f, {tally(2, ns)});
  CHECK(seq_width(a) == 2);  // max{1, 2}
  CHECK(seq_len(a) == 1);

  SeqTerm c = concat(SeqTerm::list({a}), SeqTerm::star(ns));
  CHECK(seq_len(c) == 2);
  CHECK(seq_width(c) == seq_width(a) + 1);

  // concatenation flattens; sequences never nest
  SeqTerm nested = SeqTerm::list({tally(2, ns), SeqTerm::star(ns)});
  CHECK(nested.items().size() == 3);
  for (const SeqTerm& e : nested.items()) CHECK_FALSE(e.is_list());
}

TEST_CASE("predicative interpretation") {
  RfFixture rf;
  const Signature& sig = rf.trs.signature;
  PredInterp interp(rf.trs, rf.cert.safe_mapping, rf.cert.precedence);
  const NormSignature& ns = interp.norm_signature();

  // values are normal forms: S erases them, N records the depth
  CHECK(interp.S(rf.num(2)) == SeqTerm::nil());
  CHECK(interp.N(rf.num(2)) == tally(3, ns));

  // basic redex: S(f(s^n(0); v)) = [ f^n(tally(n+1)) ]
  Term redex = Term::app(sig.id("f"), {rf.num(2), rf.num(0)});
  SeqTerm expected = SeqTerm::list(
      {SeqTerm::app(ns.of(sig.id("f")), {tally(3, ns)})});
  CHECK(interp.S(redex) == expected);

  // N(h(0;)) = [ h^n(tally(1)) * ]
  Term h0 = Term::app(sig.id("h"), {rf.num(0)});
  SeqTerm nh = interp.N(h0);
  CHECK(seq_len(nh) == 2);
  CHECK(nh.items()[0] == SeqTerm::app(ns.of(sig.id("h")), {tally(1, ns)}));
  CHECK(nh.items()[1] == SeqTerm::star(ns));
}

TEST_CASE("auxiliary sequence order") {
  NormSignature ns;
  int ff = ns.add("f", 1, 2);
  int fh = ns.add("h", 1, 1);
  ns.add_star(-1);
  SeqCmp cmp(ns, 1);

  for (int n = 0; n <= 5; ++n)
    CHECK(cmp.gppv(tally(n + 1, ns), tally(n, ns), 2));

  // ia through the precedence
  for (int n = 0; n <= 3; ++n) {
    SeqTerm lhs = SeqTerm::app(ff, {tally(n + 1, ns)});
    SeqTerm rhs = SeqTerm::app(fh, {tally(n, ns)});
    CHECK(cmp.gppv(lhs, rhs, 3));
    CHECK_FALSE(cmp.gppv(rhs, lhs, 3));
  }

  // ialst: [ h^n(tally(n)) * ]
  for (int n = 0; n <= 3; ++n) {
    SeqTerm lhs = SeqTerm::app(ff, {tally(n + 1, ns)});
    SeqTerm rhs = SeqTerm::list(
        {SeqTerm::app(fh, {tally(n, ns)}), SeqTerm::star(ns)});
    CHECK(cmp.gppv(lhs, rhs, 4));
  }

  // the auxiliary order has no case for equivalent head symbols
  SeqTerm a = SeqTerm::app(ff, {tally(2, ns)});
  SeqTerm b = SeqTerm::app(ff, {tally(1, ns)});
  CHECK_FALSE(cmp.gppv(a, b, 6));
  CHECK(cmp.gpopv(a, b, 3));  // ep belongs to the full order
}

TEST_CASE("full sequence order on the running example") {
  RfFixture rf;
  const Signature& sig = rf.trs.signature;
  PredInterp interp(rf.trs, rf.cert.safe_mapping, rf.cert.precedence);
  const NormSignature& ns = interp.norm_signature();
  int ff = ns.of(sig.id("f"));
  int fg = ns.of(sig.id("g"));

  SeqCmp cmp1(ns, 1);
  // step (8): [f^f(tally(n+1))] > [f^g(N(h(x;))) f^f(tally(n))]
  for (int n = 1; n <= 3; ++n) {
    Term x = rf.num(n - 1);  // depth(x) = n
    SeqTerm lhs = SeqTerm::list({SeqTerm::app(ff, {tally(n + 1, ns)})});
    SeqTerm nh = interp.N(Term::app(sig.id("h"), {x}));
    SeqTerm rhs = SeqTerm::list(
        {SeqTerm::app(fg, {nh}), SeqTerm::app(ff, {tally(n, ns)})});
    CHECK(cmp1.gpopv(lhs, rhs, 6));
  }

  // step (10) at the N level with k = 2
  SeqCmp cmp2(ns, 2);
  Term x = rf.num(0), y = rf.num(0);
  Term lhs_t = Term::app(sig.id("f"),
                         {Term::app(sig.id("s"), {x}), y});
  Term rhs_t = Term::app(
      sig.id("g"), {Term::app(sig.id("h"), {x}),
                    Term::app(sig.id("f"), {x, y})});
  CHECK(cmp2.gpopv(interp.N(lhs_t), interp.N(rhs_t), 6));
}

TEST_CASE("parameter monotonicity, equivalence compatibility, context closure") {
  NormSignature ns;
  int ff = ns.add("f", 1, 2);
  int fh = ns.add("h", 1, 1);
  ns.add_star(-1);

  std::mt19937 rng(77);
  auto rnd_term = [&](auto&& self, int depth) -> SeqTerm {
    int c = static_cast<int>(rng() % 4);
    if (depth <= 1 || c == 0) return SeqTerm::star(ns);
    if (c == 1) return SeqTerm::app(fh, {SeqTerm::list({self(self, depth - 1)})});
    std::vector<SeqTerm> elems;
    int n = static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) elems.push_back(self(self, depth - 1));
    return SeqTerm::app(ff, {SeqTerm::list(std::move(elems))});
  };
  auto rnd = [&](int depth) {
    if (rng() % 3 == 0) {
      std::vector<SeqTerm> elems;
      int n = static_cast<int>(rng() % 3 + 1);
      for (int i = 0; i < n; ++i) elems.push_back(rnd_term(rnd_term, depth));
      return SeqTerm::list(std::move(elems));
    }
    return rnd_term(rnd_term, depth);
  };

  SeqCmp c2(ns, 2), c3(ns, 3);
  int holds = 0;
  for (int i = 0; i < 250; ++i) {
    SeqTerm a = rnd(3), b = rnd(3);
    bool small = c2.gpopv(a, b);
    if (small) {
      ++holds;
      CHECK(c3.gpopv(a, b));  // monotone in the parameter
      // compatibility with permutation equivalence
      if (a.is_list() && a.items().size() >= 2) {
        std::vector<SeqTerm> rev(a.items().rbegin(), a.items().rend());
        CHECK(c2.gpopv(SeqTerm::list(rev), b));
      }
      // closure under sequence contexts
      SeqTerm c1 = tally(1, ns);
      CHECK(c2.gpopv(concat(c1, concat(a, c1)), concat(c1, concat(b, c1))));
    }
  }
  CHECK(holds > 10);
  CHECK(c2.length_violations == 0);
  CHECK(c3.length_violations == 0);
}

TEST_CASE("embedding of rule instances") {
  SUBCASE("multiplication, plus2") {
    const CorpusEntry& mul = test::corpus_entry("R_mul");
    const Signature& sig = mul.trs.signature;
    Substitution sigma{{"x", Term::app(sig.id("0"))}, {"y", Term::app(sig.id("0"))}};
    EmbeddingOutcome out = check_embedding(mul.trs, *mul.paper_cert,
                                           mul.trs.rules[1], sigma, std::nullopt);
    CHECK(out.s_ok);
    CHECK(out.n_ok);
  }
  SUBCASE("the f/g/h example, recursive rule") {
    RfFixture rf;
    Substitution sigma{{"x", rf.num(0)}, {"y", rf.num(0)}};
    EmbeddingOutcome out =
        check_embedding(rf.trs, rf.cert, rf.trs.rules[1], sigma, std::nullopt);
    CHECK(out.s_ok);
    CHECK(out.n_ok);
  }
  SUBCASE("reversal under parameter substitution") {
    const CorpusEntry& rev = test::corpus_entry("R_rev");
    const Signature& sig = rev.trs.signature;
    Term nil = Term::app(sig.id("nil"));
    Substitution sigma{{"x", nil}, {"xs", nil}, {"ys", nil}};
    EmbeddingOutcome out = check_embedding(rev.trs, *rev.paper_cert,
                                           rev.trs.rules[1], sigma, std::nullopt);
    CHECK(out.s_ok);
    CHECK(out.n_ok);
  }
  SUBCASE("contexts") {
    const CorpusEntry& mul = test::corpus_entry("R_mul");
    const Signature& sig = mul.trs.signature;
    Term zero = Term::app(sig.id("0"));
    Substitution sigma{{"x", zero}, {"y", zero}};
    Term ctx = Term::app(sig.id("plus"),
                         {Term::app(sig.id("s"), {Term::var("#hole")}), zero});
    EmbeddingOutcome out =
        check_embedding(mul.trs, *mul.paper_cert, mul.trs.rules[1], sigma, ctx);
    CHECK(out.s_ok);
    CHECK(out.n_ok);
  }
  SUBCASE("non-normalizing substitutions are rejected") {
    const CorpusEntry& mul = test::corpus_entry("R_mul");
    const Signature& sig = mul.trs.signature;
    Term zero = Term::app(sig.id("0"));
    Term redex = Term::app(sig.id("plus"), {zero, zero});
    Substitution sigma{{"x", redex}, {"y", zero}};
    CHECK_THROWS_AS(check_embedding(mul.trs, *mul.paper_cert, mul.trs.rules[1],
                                    sigma, std::nullopt),
                    std::invalid_argument);
  }
}

TEST_CASE("slow estimation") {
  NormSignature ns;
  int fh = ns.add("h", 1, 0);
  int star = ns.add_star(-1);

  SlowCaps caps;
  caps.max_depth = 2;
  caps.max_width = 7;
  caps.symbols = {star};

  CHECK(slow_estimate(SeqTerm::nil(), 1, caps, ns).length == 0);
  CHECK(slow_estimate(SeqTerm::star(ns), 1, caps, ns).length == 1);
  for (int n = 1; n <= 5; ++n)
    CHECK(slow_estimate(tally(n, ns), 1, caps, ns).length == n);

  // caps that do not contain the start term are an error
  SlowCaps tiny;
  tiny.max_depth = 1;
  tiny.max_width = 1;
  tiny.symbols = {star};
  CHECK_THROWS_AS(slow_estimate(tally(3, ns), 1, tiny, ns), std::invalid_argument);

  // additivity of concatenation on the capped universe
  SlowCaps wide;
  wide.max_depth = 2;
  wide.max_width = 5;
  wide.symbols = {star, fh};
  // pieces small enough that composite descending chains stay inside the cap
  std::vector<SeqTerm> samples = {
      tally(1, ns), tally(2, ns), SeqTerm::list({SeqTerm::app(fh, {SeqTerm::nil()})})};
  for (const SeqTerm& a : samples)
    for (const SeqTerm& b : samples) {
      long long sa = slow_estimate(a, 1, wide, ns).length;
      long long sb = slow_estimate(b, 1, wide, ns).length;
      CHECK(slow_estimate(concat(a, b), 1, wide, ns).length == sa + sb);
    }
}

TEST_CASE("bound constants and the homomorphism") {
  auto [c10, d10] = bound_constants(1, 0);
  CHECK(c10 == 1);
  CHECK(d10 == 2);
  auto [c20, d20] = bound_constants(2, 0);
  CHECK(c20 == 4);
  CHECK(d20 == 3);
  auto [c21, d21] = bound_constants(2, 1);
  CHECK(d21 == 217);  // (3*2)^3 + 1

  CHECK(homo({3, 1}, 2, BigInt(4)) == 13);
  CHECK_THROWS_AS(homo({3, 1}, 2, BigInt(3)), std::invalid_argument);
  CHECK_THROWS_AS(homo({1, 2, 3}, 2, BigInt(9)), std::invalid_argument);

  // exhaustive order preservation on multisets of size <= 3 over {0..4}
  std::vector<std::vector<long long>> all;
  std::function<void(std::vector<long long>&, int, int)> build =
      [&](std::vector<long long>& cur, int lo, int left) {
        if (!cur.empty()) all.push_back(cur);
        if (left == 0) return;
        for (int v = lo; v <= 4; ++v) {
          cur.push_back(v);
          build(cur, v, left - 1);
          cur.pop_back();
        }
      };
  std::vector<long long> cur;
  build(cur, 0, 3);

  const int k = 3;
  const BigInt c = 5;
  auto strictly_smaller = [&](const std::vector<long long>& a,
                              const std::vector<long long>& b) {
    // multiset extension of > on naturals via the difference definition
    test::MulOracle oracle{[](int x) { return x; }, [](int x, int y) { return x > y; }};
    std::vector<int> ai(a.begin(), a.end()), bi(b.begin(), b.end());
    return oracle.strict(ai, bi);
  };
  for (const auto& a : all) {
    CHECK(boost::multiprecision::pow(c, static_cast<unsigned>(k)) > homo(a, k, c));
    for (const auto& b : all)
      if (strictly_smaller(a, b)) CHECK(homo(a, k, c) > homo(b, k, c));
  }
}

TEST_CASE("micro bound check") {
  // Slow(f(a_1..a_n)) <= c_{k,p} (m+2)^{d_{k,p}} with m the homomorphism
  // value over the argument Slows, at leaf scale
  for (int k = 1; k <= 2; ++k) {
    for (int p = 0; p <= 1; ++p) {
      NormSignature ns;
      int fh = ns.add("h", 1, 0);
      int ff = ns.add("f", 1, p);
      int star = ns.add_star(-1);
      SlowCaps caps;
      caps.max_depth = 2;
      caps.max_width = 4;
      caps.symbols = p == 0 ? std::vector<int>{star, ff} : std::vector<int>{star, fh, ff};

      auto [c, d] = bound_constants(k, p);
      for (int n = 0; n <= 2; ++n) {
        SeqTerm arg = tally(n, ns);
        SeqTerm term = SeqTerm::app(ff, {arg});
        long long slow_term = slow_estimate(term, k, caps, ns).length;
        long long slow_arg = slow_estimate(arg, k, caps, ns).length;
        BigInt m = mslow({slow_arg}, k);
        BigInt bound = c * boost::multiprecision::pow(
                               m + 2, static_cast<unsigned>(d));
        CHECK(BigInt(slow_term) <= bound);
      }
    }
  }
}

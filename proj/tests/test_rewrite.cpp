#include <doctest.h>

#include <unordered_map>

#include "helpers.hpp"
#include "popstar/rewrite.hpp"

using namespace popstar;

namespace {

struct Mul {
  Trs trs = test::corpus_entry("R_mul").trs;
  SymbolId plus = trs.signature.id("plus");
  SymbolId times = trs.signature.id("times");
  SymbolId s = trs.signature.id("s");
  SymbolId z = trs.signature.id("0");
  Term num(int n) {
    Term t = Term::app(z);
    for (int i = 0; i < n; ++i) t = Term::app(s, {t});
    return t;
  }
};

// Independent oracle: the one-step-successor recursion, memoised on terms but
// never decomposing arguments the way the engine does.
long long naive_dh(const Term& t, const Trs& r,
                   std::unordered_map<Term, long long, TermHash>& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  long long best = 0;
  for (const Term& u : innermost_successors(t, r)) {
    std::unordered_map<Term, long long, TermHash>& m = memo;
    best = std::max(best, 1 + naive_dh(u, r, m));
  }
  memo.emplace(t, best);
  return best;
}

}  // namespace

TEST_CASE("innermost successors") {
  Mul m;
  Term t = Term::app(m.plus, {m.num(1), m.num(0)});
  auto succ = innermost_successors(t, m.trs);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0] == Term::app(m.s, {Term::app(m.plus, {m.num(0), m.num(0)})}));

  CHECK(innermost_successors(m.num(0), m.trs).empty());

  // nondeterministic choice has two reducts
  const Trs& sat = test::corpus_entry("R_sat").trs;
  const Signature& sig = sat.signature;
  Term a = Term::var("a"), b = Term::var("b");
  Term list = Term::app(sig.id("cons"), {a, Term::app(sig.id("cons"),
                                                      {b, Term::app(sig.id("nil"))})});
  Term choice = Term::app(sig.id("choice"), {list});
  CHECK(innermost_successors(choice, sat).size() == 2);
}

TEST_CASE("normal forms") {
  Mul m;
  CHECK(is_normal_form(m.num(2), m.trs));
  CHECK_FALSE(is_normal_form(Term::app(m.plus, {m.num(0), m.num(0)}), m.trs));
  CHECK(is_normal_form(Term::var("x"), m.trs));
}

TEST_CASE("normal form iff no successors") {
  Mul m;
  test::TermGen gen(m.trs.signature, 21);
  for (int i = 0; i < 150; ++i) {
    Term t = gen.term(4);
    CHECK(is_normal_form(t, m.trs) == innermost_successors(t, m.trs).empty());
  }
}

TEST_CASE("derivation height on multiplication") {
  Mul m;
  Term t = Term::app(m.times, {m.num(1), m.num(1)});
  DerivationStats st = derivation_height(t, m.trs);
  CHECK_FALSE(st.capped);
  CHECK(st.height == 4);

  CHECK(derivation_height(m.num(3), m.trs).height == 0);
}

TEST_CASE("derivation height matches the successor-recursion oracle") {
  Mul m;
  RewriteEngine engine(m.trs);
  std::unordered_map<Term, long long, TermHash> memo;
  for (int n = 0; n <= 6; ++n)
    for (int k = 0; k <= 6; ++k) {
      Term t = Term::app(m.times, {m.num(n), m.num(k)});
      DerivationStats st = engine.derivation_height(t);
      REQUIRE_FALSE(st.capped);
      CHECK(st.height == naive_dh(t, m.trs, memo));
    }
}

TEST_CASE("successors strictly decrease the height") {
  Mul m;
  RewriteEngine engine(m.trs);
  test::TermGen gen(m.trs.signature, 5);
  for (int i = 0; i < 60; ++i) {
    Term t = gen.term(4, true);
    DerivationStats st = engine.derivation_height(t);
    if (st.capped) continue;
    for (const Term& u : engine.innermost_successors(t)) {
      DerivationStats su = engine.derivation_height(u);
      if (!su.capped) CHECK(su.height < st.height);
    }
  }
}

TEST_CASE("maximal derivations from basic terms end in normal forms") {
  Mul m;
  RewriteEngine engine(m.trs);
  test::TermGen gen(m.trs.signature, 13);
  for (int i = 0; i < 40; ++i) {
    Term t = gen.basic(3);
    Term cur = t;
    while (true) {
      auto succ = engine.innermost_successors(cur);
      if (succ.empty()) break;
      cur = succ.front();
    }
    CHECK(engine.is_normal_form(cur));
    if (is_value(cur, m.trs.signature)) CHECK(engine.is_normal_form(cur));
  }
}

TEST_CASE("exponential growth of the bin system") {
  const Trs& bin = test::corpus_entry("R_bin").trs;
  const Signature& sig = bin.signature;
  SymbolId b = sig.id("bin"), s = sig.id("s"), z = sig.id("0");
  auto num = [&](int n) {
    Term t = Term::app(z);
    for (int i = 0; i < n; ++i) t = Term::app(s, {t});
    return t;
  };

  // closed-form oracle: T(n,0) = 1 for n >= 0, T(0,m) = 1 for m >= 1,
  // T(n,m) = 1 + T(n-1,m) + T(n-1,m-1)
  std::map<std::pair<int, int>, long long> tv;
  std::function<long long(int, int)> T = [&](int n, int k) -> long long {
    if (k == 0 || n == 0) return 1;
    auto key = std::make_pair(n, k);
    auto it = tv.find(key);
    if (it != tv.end()) return it->second;
    long long v = 1 + T(n - 1, k) + T(n - 1, k - 1);
    tv.emplace(key, v);
    return v;
  };

  RewriteEngine engine(bin);
  for (int n = 1; n <= 8; ++n) {
    DerivationStats st = engine.derivation_height(Term::app(b, {num(n), num(n)}));
    REQUIRE_FALSE(st.capped);
    CHECK(st.height == T(n, n));
  }
  DerivationStats st8 = engine.derivation_height(Term::app(b, {num(8), num(8)}));
  CHECK(st8.height >= (1LL << 8));
}

TEST_CASE("cap degrades gracefully") {
  Mul m;
  Term t = Term::app(m.times, {m.num(6), m.num(6)});
  DerivationStats st = derivation_height(t, m.trs, 5);
  CHECK(st.capped);
  CHECK(st.height >= 0);
}

TEST_CASE("rc_fit slopes") {
  Trs rk1 = gen_rk(1);
  RcFit fit = rc_fit(rk1, [&](int n) { return rk_start(rk1, 1, n); }, 24);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.3));
  CHECK_FALSE(fit.superpolynomial);

  const Trs& bin = test::corpus_entry("R_bin").trs;
  const Signature& sig = bin.signature;
  SymbolId b = sig.id("bin"), s = sig.id("s"), z = sig.id("0");
  RcFit bfit = rc_fit(
      bin,
      [&](int n) {
        Term t = Term::app(z);
        for (int i = 0; i < n; ++i) t = Term::app(s, {t});
        return Term::app(b, {t, t});
      },
      11);
  CHECK(bfit.superpolynomial);

  // degenerate family: constant heights
  Trs single = gen_rk(1);
  RcFit dfit = rc_fit(single, [&](int) { return rk_start(single, 1, 1); }, 10);
  CHECK(dfit.degenerate);
  CHECK(dfit.slope == 0.0);
}

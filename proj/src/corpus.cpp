#include "popstar/corpus.hpp"

#include <functional>

#include "popstar/parse.hpp"

namespace popstar {

namespace {

Certificate make_cert(const Trs& trs, OrderKind order,
                      const std::vector<std::pair<std::string, int>>& ranks,
                      const std::vector<std::pair<std::string, std::set<int>>>& safes) {
  Certificate c;
  c.order_kind = order;
  for (const auto& [name, r] : ranks) c.precedence.set_rank(trs.signature.id(name), r);
  for (const auto& [name, s] : safes) c.safe_mapping.set(trs.signature.id(name), s);
  return c;
}

const char* kMul = R"((VAR x y)
(RULES
  plus(0,y) -> y
  plus(s(x),y) -> s(plus(x,y))
  times(0,y) -> 0
  times(s(x),y) -> plus(y,times(x,y))
))";

const char* kMulTimes2a = R"((VAR x y)
(RULES
  plus(0,y) -> y
  plus(s(x),y) -> s(plus(x,y))
  times(0,y) -> 0
  times(s(x),y) -> plus(times(x,y),y)
))";

const char* kMulExp = R"((VAR x y)
(RULES
  plus(0,y) -> y
  plus(s(x),y) -> s(plus(x,y))
  times(0,y) -> 0
  times(s(x),y) -> plus(y,times(x,y))
  exp(0,y) -> s(0)
  exp(s(x),y) -> times(y,exp(x,y))
))";

const char* kSat = R"((VAR x y l ls ys c cs a b bs t e as)
(RULES
  not(pos(x)) -> min(x)
  not(min(x)) -> pos(x)
  eq(d0(x),d1(y)) -> false
  eq(d0(x),d0(y)) -> eq(x,y)
  eq(d1(x),d0(y)) -> false
  eq(d1(x),d1(y)) -> eq(x,y)
  eq(min(x),pos(y)) -> false
  eq(min(x),min(y)) -> eq(x,y)
  eq(pos(x),min(y)) -> false
  eq(pos(x),pos(y)) -> eq(x,y)
  eq(eps,eps) -> true
  if(true,t,e) -> t
  if(false,t,e) -> e
  verify(nil) -> true
  verify(cons(l,ls)) -> if(member(not(l),ls),false,verify(ls))
  member(x,nil) -> false
  member(x,cons(y,ys)) -> if(eq(x,y),true,member(x,ys))
  guess(nil) -> nil
  guess(cons(c,cs)) -> cons(choice(c),guess(cs))
  choice(cons(a,nil)) -> a
  choice(cons(a,cons(b,bs))) -> choice(cons(b,bs))
  choice(cons(a,cons(b,bs))) -> a
  issat(cs) -> issat1(guess(cs))
  issat1(as) -> if(verify(as),as,unsat)
))";

const char* kDup = R"((VAR n t)
(RULES
  btree(0) -> leaf
  btree(s(n)) -> dup(btree(n))
  dup(t) -> node(t,t)
))";

const char* kDc = R"((VAR x y)
(RULES
  plus(0,y) -> y
  plus(s(x),y) -> s(plus(x,y))
  d(0) -> 0
  d(s(x)) -> s(s(d(x)))
  q(0) -> 0
  q(s(x)) -> plus(s(d(x)),q(x))
))";

const char* kBin = R"((VAR x y)
(RULES
  bin(x,0) -> s(0)
  bin(0,s(y)) -> 0
  bin(s(x),s(y)) -> p(bin(x,s(y)),bin(x,y))
))";

const char* kRev = R"((VAR x xs ys)
(RULES
  revt(nil,ys) -> ys
  revt(cons(x,xs),ys) -> revt(xs,cons(x,ys))
  rev(xs) -> revt(xs,nil)
))";

const char* kNc = R"((VAR n)
(RULES
  f(n) -> h(gs(n))
  h(g(n)) -> c(h(n),h(n))
  g(bot) -> c(h(bot),h(bot))
  gs(0) -> 0
  gs(s(n)) -> g(gs(n))
))";

}  // namespace

Trs gen_rk(int k) {
  if (k < 1) throw std::invalid_argument("gen_rk needs k >= 1");
  Trs trs;
  SymbolId f = trs.signature.add("f", k, SymbolKind::Defined);
  SymbolId s = trs.signature.add("s", 1, SymbolKind::Constructor);
  SymbolId z = trs.signature.add("0", 0, SymbolKind::Constructor);

  auto var = [](int i) { return Term::var("x" + std::to_string(i)); };
  for (int i = 1; i <= k; ++i) {
    std::vector<Term> lhs_args, rhs_args;
    for (int pos = 1; pos <= k; ++pos) {
      if (pos < i)
        lhs_args.push_back(Term::app(z));
      else if (pos == i)
        lhs_args.push_back(Term::app(s, {var(i)}));
      else
        lhs_args.push_back(var(pos));
      if (pos <= i)
        rhs_args.push_back(var(i));
      else
        rhs_args.push_back(var(pos));
    }
    trs.rules.push_back(Rule{Term::app(f, std::move(lhs_args)),
                             Term::app(f, std::move(rhs_args))});
  }
  trs.validate();
  return trs;
}

Term rk_start(const Trs& rk, int k, int n) {
  SymbolId f = rk.signature.id("f");
  SymbolId s = rk.signature.id("s");
  SymbolId z = rk.signature.id("0");
  Term tower = Term::app(z);
  for (int i = 0; i < n; ++i) tower = Term::app(s, {tower});
  std::vector<Term> args(static_cast<size_t>(k), tower);
  return Term::app(f, std::move(args));
}

BSpec BSpec::proj(int k, int l, int j) {
  BSpec b;
  b.kind = Kind::I;
  b.k = k;
  b.l = l;
  b.j = j;
  return b;
}
BSpec BSpec::pred() {
  BSpec b;
  b.kind = Kind::P;
  b.k = 0;
  b.l = 1;
  return b;
}
BSpec BSpec::cond() {
  BSpec b;
  b.kind = Kind::C;
  b.k = 0;
  b.l = 4;
  return b;
}
BSpec BSpec::zero(int k, int l) {
  BSpec b;
  b.kind = Kind::O;
  b.k = k;
  b.l = l;
  return b;
}
BSpec BSpec::sc(BSpec h, std::vector<BSpec> rs, std::vector<BSpec> ss) {
  BSpec b;
  b.kind = Kind::SC;
  b.sc_num_r = static_cast<int>(rs.size());
  b.subs.push_back(std::move(h));
  for (BSpec& r : rs) b.subs.push_back(std::move(r));
  for (BSpec& s : ss) b.subs.push_back(std::move(s));
  // layout: every r works on the k normal arguments; l comes from the s's
  if (b.sc_num_r > 0)
    b.k = b.subs[1].k;
  else if (b.subs.size() > 1)
    b.k = b.subs[1].k;
  if (static_cast<int>(b.subs.size()) > 1 + b.sc_num_r) {
    b.k = b.subs[static_cast<size_t>(1 + b.sc_num_r)].k;
    b.l = b.subs[static_cast<size_t>(1 + b.sc_num_r)].l;
  } else {
    b.l = 0;
  }
  return b;
}
BSpec BSpec::srn(BSpec g, BSpec h1, BSpec h2) {
  BSpec b;
  b.kind = Kind::SRN;
  b.k = g.k + 1;
  b.l = g.l;
  b.subs.push_back(std::move(g));
  b.subs.push_back(std::move(h1));
  b.subs.push_back(std::move(h2));
  return b;
}

namespace {

struct BBuilder {
  Trs trs;
  Certificate cert;
  SymbolId eps, s1, s2;
  std::map<std::string, SymbolId> known;

  BBuilder() {
    eps = trs.signature.add("eps", 0, SymbolKind::Constructor);
    s1 = trs.signature.add("s1", 1, SymbolKind::Constructor);
    s2 = trs.signature.add("s2", 1, SymbolKind::Constructor);
    cert.order_kind = OrderKind::Pop;
  }

  static std::string mangle(const BSpec& b) {
    using K = BSpec::Kind;
    switch (b.kind) {
      case K::P: return "P";
      case K::C: return "C";
      case K::I:
        return "i" + std::to_string(b.k) + "_" + std::to_string(b.l) + "_" +
               std::to_string(b.j);
      case K::O: return "o" + std::to_string(b.k) + "_" + std::to_string(b.l);
      case K::SC: {
        std::string s = "sc_" + mangle(b.subs[0]);
        for (size_t i = 1; i < b.subs.size(); ++i) s += "_" + mangle(b.subs[i]);
        return s;
      }
      case K::SRN: {
        return "srn_" + mangle(b.subs[0]) + "_" + mangle(b.subs[1]) + "_" +
               mangle(b.subs[2]);
      }
    }
    return "?";
  }

  static int lh(const BSpec& b) {
    using K = BSpec::Kind;
    if (b.kind == K::SC || b.kind == K::SRN) {
      int total = 1;
      for (const BSpec& s : b.subs) total += lh(s);
      return total;
    }
    return 0;
  }

  std::vector<Term> vars(const std::string& prefix, int count) {
    std::vector<Term> out;
    for (int i = 1; i <= count; ++i) out.push_back(Term::var(prefix + std::to_string(i)));
    return out;
  }

  // declares the symbol, emits its rules (once) and returns its id
  SymbolId emit(const BSpec& b) {
    using K = BSpec::Kind;
    std::string name = mangle(b);
    auto it = known.find(name);
    if (it != known.end()) return it->second;

    int arity = b.k + b.l;
    SymbolId f = trs.signature.add(name, arity, SymbolKind::Defined);
    known.emplace(name, f);
    std::set<int> safe;
    for (int i = b.k + 1; i <= arity; ++i) safe.insert(i);
    cert.safe_mapping.set(f, safe);
    cert.precedence.set_rank(f, lh(b));

    auto xy = [&](int k, int l) {
      std::vector<Term> args = vars("x", k);
      for (Term& t : vars("y", l)) args.push_back(t);
      return args;
    };

    switch (b.kind) {
      case K::P: {
        trs.rules.push_back(Rule{Term::app(f, {Term::app(eps)}), Term::app(eps)});
        trs.rules.push_back(
            Rule{Term::app(f, {Term::app(s1, {Term::var("x")})}), Term::var("x")});
        trs.rules.push_back(
            Rule{Term::app(f, {Term::app(s2, {Term::var("x")})}), Term::var("x")});
        break;
      }
      case K::C: {
        Term y = Term::var("y"), z1 = Term::var("z1"), z2 = Term::var("z2");
        trs.rules.push_back(Rule{Term::app(f, {Term::app(eps), y, z1, z2}), y});
        trs.rules.push_back(
            Rule{Term::app(f, {Term::app(s1, {Term::var("x")}), y, z1, z2}), z1});
        trs.rules.push_back(
            Rule{Term::app(f, {Term::app(s2, {Term::var("x")}), y, z1, z2}), z2});
        break;
      }
      case K::I: {
        if (b.j < 1 || b.j > arity)
          throw std::invalid_argument("projection index out of range");
        std::vector<Term> args = xy(b.k, b.l);
        Term rhs = args[static_cast<size_t>(b.j - 1)];
        trs.rules.push_back(Rule{Term::app(f, std::move(args)), rhs});
        break;
      }
      case K::O: {
        trs.rules.push_back(Rule{Term::app(f, xy(b.k, b.l)), Term::app(eps)});
        break;
      }
      case K::SC: {
        const BSpec& h = b.subs[0];
        int m = b.sc_num_r;
        int n = static_cast<int>(b.subs.size()) - 1 - m;
        if (h.k != m || h.l != n)
          throw std::invalid_argument("safe composition arity mismatch at " + name);
        for (int i = 1; i <= m; ++i)
          if (b.subs[static_cast<size_t>(i)].k != b.k ||
              b.subs[static_cast<size_t>(i)].l != 0)
            throw std::invalid_argument("normal component arity mismatch at " + name);
        for (int i = m + 1; i <= m + n; ++i)
          if (b.subs[static_cast<size_t>(i)].k != b.k ||
              b.subs[static_cast<size_t>(i)].l != b.l)
            throw std::invalid_argument("safe component arity mismatch at " + name);

        std::vector<Term> xs = vars("x", b.k), ys = vars("y", b.l);
        std::vector<Term> outer_args;
        for (int i = 1; i <= m; ++i) {
          SymbolId r = emit(b.subs[static_cast<size_t>(i)]);
          outer_args.push_back(Term::app(r, xs));
        }
        for (int i = m + 1; i <= m + n; ++i) {
          SymbolId s = emit(b.subs[static_cast<size_t>(i)]);
          std::vector<Term> args = xs;
          for (const Term& y : ys) args.push_back(y);
          outer_args.push_back(Term::app(s, std::move(args)));
        }
        SymbolId hh = emit(h);
        std::vector<Term> lhs_args = xs;
        for (const Term& y : ys) lhs_args.push_back(y);
        trs.rules.push_back(Rule{Term::app(f, std::move(lhs_args)),
                                 Term::app(hh, std::move(outer_args))});
        break;
      }
      case K::SRN: {
        const BSpec& g = b.subs[0];
        if (g.k + 1 != b.k || g.l != b.l)
          throw std::invalid_argument("recursion base arity mismatch at " + name);
        for (int i = 1; i <= 2; ++i)
          if (b.subs[static_cast<size_t>(i)].k != b.k ||
              b.subs[static_cast<size_t>(i)].l != b.l + 1)
            throw std::invalid_argument("recursion step arity mismatch at " + name);

        std::vector<Term> xs = vars("x", b.k - 1), ys = vars("y", b.l);
        SymbolId gg = emit(g);
        {
          std::vector<Term> lhs_args{Term::app(eps)};
          for (const Term& x : xs) lhs_args.push_back(x);
          for (const Term& y : ys) lhs_args.push_back(y);
          std::vector<Term> rhs_args = xs;
          for (const Term& y : ys) rhs_args.push_back(y);
          trs.rules.push_back(Rule{Term::app(f, std::move(lhs_args)),
                                   Term::app(gg, std::move(rhs_args))});
        }
        for (int i = 1; i <= 2; ++i) {
          SymbolId hi = emit(b.subs[static_cast<size_t>(i)]);
          Term z = Term::var("z");
          std::vector<Term> lhs_args{Term::app(i == 1 ? s1 : s2, {z})};
          for (const Term& x : xs) lhs_args.push_back(x);
          for (const Term& y : ys) lhs_args.push_back(y);
          std::vector<Term> rec_args{z};
          for (const Term& x : xs) rec_args.push_back(x);
          for (const Term& y : ys) rec_args.push_back(y);
          std::vector<Term> rhs_args{z};
          for (const Term& x : xs) rhs_args.push_back(x);
          for (const Term& y : ys) rhs_args.push_back(y);
          rhs_args.push_back(Term::app(f, rec_args));
          trs.rules.push_back(Rule{Term::app(f, std::move(lhs_args)),
                                   Term::app(hi, std::move(rhs_args))});
        }
        break;
      }
    }
    return f;
  }
};

}  // namespace

std::pair<Trs, Certificate> gen_b_fragment(const BSpec& spec) {
  BBuilder b;
  b.emit(spec);
  b.trs.validate();
  return {std::move(b.trs), std::move(b.cert)};
}

std::vector<CorpusEntry> bundled_corpus() {
  std::vector<CorpusEntry> out;

  auto add = [&](const std::string& id, const char* src,
                 std::map<OrderKind, Expect> expected) -> CorpusEntry& {
    CorpusEntry e;
    e.id = id;
    e.source = src;
    e.trs = parse_problem(src).trs;
    e.expected = std::move(expected);
    out.push_back(std::move(e));
    return out.back();
  };

  {
    auto& e = add("R_mul", kMul,
                  {{OrderKind::Pop, Expect::Compatible},
                   {OrderKind::PopPs, Expect::Compatible},
                   {OrderKind::Mpo, Expect::Compatible}});
    e.paper_cert = make_cert(e.trs, OrderKind::Pop,
                             {{"times", 2}, {"plus", 1}},
                             {{"times", {}}, {"plus", {2}}});
  }
  {
    // The separation of arguments follows the published one, except that the
    // equality test recurses on its second argument (position 1 safe) so the
    // membership test can pass its safe element through.
    auto& e = add("R_sat", kSat,
                  {{OrderKind::Pop, Expect::Compatible},
                   {OrderKind::PopPs, Expect::Compatible},
                   {OrderKind::Mpo, Expect::Compatible}});
    e.paper_cert = make_cert(
        e.trs, OrderKind::Pop,
        {{"issat", 6}, {"issat1", 5}, {"verify", 4}, {"member", 3}, {"guess", 3},
         {"eq", 2}, {"choice", 2}, {"not", 1}, {"if", 1}},
        {{"issat", {}}, {"issat1", {}}, {"verify", {}}, {"guess", {}}, {"choice", {}},
         {"member", {1}}, {"eq", {1}}, {"not", {1}}, {"if", {1, 2, 3}}});
  }
  {
    auto& e = add("R_dup", kDup,
                  {{OrderKind::Pop, Expect::Compatible},
                   {OrderKind::PopPs, Expect::Compatible}});
    e.paper_cert = make_cert(e.trs, OrderKind::Pop, {{"btree", 1}, {"dup", 0}},
                             {{"btree", {}}, {"dup", {1}}});
  }
  {
    auto& e = add("R_dc", kDc,
                  {{OrderKind::Pop, Expect::Compatible},
                   {OrderKind::PopPs, Expect::Compatible}});
    e.paper_cert = make_cert(e.trs, OrderKind::Pop,
                             {{"q", 2}, {"d", 1}, {"plus", 0}},
                             {{"q", {}}, {"d", {}}, {"plus", {2}}});
  }
  {
    auto& e = add("R_bin", kBin,
                  {{OrderKind::Pop, Expect::Incompatible},
                   {OrderKind::PopPs, Expect::Incompatible},
                   {OrderKind::Mpo, Expect::Compatible}});
    e.paper_cert = make_cert(e.trs, OrderKind::Mpo, {{"bin", 0}}, {{"bin", {}}});
  }
  {
    auto& e = add("R_rev", kRev,
                  {{OrderKind::Pop, Expect::Incompatible},
                   {OrderKind::PopPs, Expect::Compatible}});
    e.paper_cert = make_cert(e.trs, OrderKind::PopPs, {{"rev", 1}, {"revt", 0}},
                             {{"rev", {}}, {"revt", {2}}});
  }
  add("R_nc", kNc,
      {{OrderKind::Pop, Expect::Reject},
       {OrderKind::PopPs, Expect::Reject},
       {OrderKind::Mpo, Expect::Reject}});
  add("mul_times2a", kMulTimes2a,
      {{OrderKind::Pop, Expect::Incompatible},
       {OrderKind::PopPs, Expect::Incompatible}});
  add("mul_exp", kMulExp,
      {{OrderKind::Pop, Expect::Incompatible},
       {OrderKind::PopPs, Expect::Incompatible}});

  for (int k = 1; k <= 3; ++k) {
    CorpusEntry e;
    e.id = "rk" + std::to_string(k);
    e.trs = gen_rk(k);
    e.source = print_tpdb(e.trs);
    e.expected = {{OrderKind::Pop, Expect::Compatible},
                  {OrderKind::PopPs, Expect::Compatible}};
    e.paper_cert = make_cert(e.trs, OrderKind::Pop, {{"f", 0}}, {{"f", {}}});
    out.push_back(std::move(e));
  }

  // three fragments of the B schema with their recursion-depth certificates
  {
    auto [trs, cert] = gen_b_fragment(BSpec::proj(2, 1, 2));
    CorpusEntry e;
    e.id = "b_proj";
    e.trs = std::move(trs);
    e.source = print_tpdb(e.trs);
    e.expected = {{OrderKind::Pop, Expect::Compatible}};
    e.paper_cert = std::move(cert);
    out.push_back(std::move(e));
  }
  {
    auto [trs, cert] =
        gen_b_fragment(BSpec::sc(BSpec::pred(), {}, {BSpec::proj(0, 1, 1)}));
    CorpusEntry e;
    e.id = "b_sc";
    e.trs = std::move(trs);
    e.source = print_tpdb(e.trs);
    e.expected = {{OrderKind::Pop, Expect::Compatible}};
    e.paper_cert = std::move(cert);
    out.push_back(std::move(e));
  }
  {
    BSpec step = BSpec::sc(BSpec::pred(), {}, {BSpec::proj(1, 2, 2)});
    auto [trs, cert] =
        gen_b_fragment(BSpec::srn(BSpec::proj(0, 1, 1), step, step));
    CorpusEntry e;
    e.id = "b_srn";
    e.trs = std::move(trs);
    e.source = print_tpdb(e.trs);
    e.expected = {{OrderKind::Pop, Expect::Compatible}};
    e.paper_cert = std::move(cert);
    out.push_back(std::move(e));
  }

  return out;
}

}  // namespace popstar

#include "popstar/seqorder.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "popstar/multiset.hpp"

namespace popstar {

namespace {
size_t combine(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

// Commutative structural hash respecting symbol equivalence classes; equal
// hashes are confirmed by exact backtracking in eqi_rec.
size_t SeqCmp::chash(const SeqTerm& t) {
  auto it = chash_memo_.find(t);
  if (it != chash_memo_.end()) return it->second;
  size_t h = 0;
  switch (t.kind()) {
    case SeqTerm::Kind::Var:
      h = combine(0x11, std::hash<std::string>{}(t.var_name()));
      break;
    case SeqTerm::Kind::App: {
      size_t sum = 0;
      for (const SeqTerm& a : t.items()) sum += chash(a);
      h = combine(combine(0x22, static_cast<size_t>(ns_.rank(t.sym()) + 1000)), sum);
      h = combine(h, t.items().size());
      break;
    }
    case SeqTerm::Kind::List: {
      size_t sum = 0;
      for (const SeqTerm& e : t.items()) sum += chash(e);
      h = combine(combine(0x33, sum), t.items().size());
      break;
    }
  }
  chash_memo_.emplace(t, h);
  return h;
}

bool SeqCmp::eqi(const SeqTerm& a, const SeqTerm& b) {
  if (a == b) return true;
  if (chash(a) != chash(b)) return false;
  auto key = std::make_pair(a, b);
  auto it = eqi_memo_.find(key);
  if (it != eqi_memo_.end()) return it->second;
  bool r = eqi_rec(a, b);
  eqi_memo_.emplace(key, r);
  return r;
}

bool SeqCmp::eqi_rec(const SeqTerm& a, const SeqTerm& b) {
  if (a.kind() != b.kind()) return false;
  if (a.is_var()) return a.var_name() == b.var_name();
  if (a.is_app() && !ns_.eq(a.sym(), b.sym())) return false;
  if (a.items().size() != b.items().size()) return false;
  size_t n = a.items().size();
  std::vector<bool> used(n, false);
  std::function<bool(size_t)> assign = [&](size_t i) -> bool {
    if (i == n) return true;
    for (size_t j = 0; j < n; ++j) {
      if (used[j] || !eqi(a.items()[i], b.items()[j])) continue;
      used[j] = true;
      if (assign(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return assign(0);
}

bool SeqCmp::gppv(const SeqTerm& a, const SeqTerm& b, int l) { return cmp(a, b, l, false); }
bool SeqCmp::gpopv(const SeqTerm& a, const SeqTerm& b, int l) {
  bool r = cmp(a, b, l, true);
  if (r && l == k_) {
    ++checked;
    if (seq_len(b) > seq_width(a) + k_) ++length_violations;
  }
  return r;
}

// Case ms: partition the right-hand elements (up to equivalence) into one
// group per left-hand element; singleton groups may be covered equally,
// everything else strictly.
bool SeqCmp::ms_clause(const SeqTerm& a, const SeqTerm& b, int l, bool full) {
  std::vector<SeqTerm> bs = to_elements(b);
  const int m = static_cast<int>(bs.size());
  const int n = static_cast<int>(a.items().size());
  if (m > seq_width(a) + k_) return false;
  if (n == 0) return false;  // nil has no strict successors

  // equivalence classes of the right-hand elements
  std::vector<SeqTerm> reps;
  std::vector<int> counts;
  for (const SeqTerm& e : bs) {
    bool placed = false;
    for (size_t c = 0; c < reps.size() && !placed; ++c)
      if (eqi(e, reps[c])) {
        ++counts[c];
        placed = true;
      }
    if (!placed) {
      reps.push_back(e);
      counts.push_back(1);
    }
  }
  const int q = static_cast<int>(reps.size());

  // options per slot: -1 unusable, 0 weak (equal), 1 strict
  auto slot_single = [&](int i, int c, bool want_strict) -> bool {
    const SeqTerm& ai = a.items()[static_cast<size_t>(i)];
    if (want_strict) return cmp(ai, reps[static_cast<size_t>(c)], l, full);
    return eqi(ai, reps[static_cast<size_t>(c)]);
  };
  auto slot_empty = [&](int i) -> bool {
    return cmp(a.items()[static_cast<size_t>(i)], SeqTerm::nil(), l, full);
  };
  auto slot_group = [&](int i, const std::vector<int>& v) -> bool {
    const SeqTerm& ai = a.items()[static_cast<size_t>(i)];
    if (!ai.is_app()) return false;
    std::vector<SeqTerm> group;
    for (int c = 0; c < q; ++c)
      for (int r = 0; r < v[static_cast<size_t>(c)]; ++r)
        group.push_back(reps[static_cast<size_t>(c)]);
    if (static_cast<int>(group.size()) > ai.width() + k_) return false;
    return cmp(ai, SeqTerm::list(std::move(group)), l, full);
  };

  std::map<std::tuple<int, std::vector<int>, bool>, bool> dp;
  std::function<bool(int, std::vector<int>&, bool)> rec = [&](int i, std::vector<int>& rem,
                                                              bool strict) -> bool {
    if (i == n) {
      if (!strict) return false;
      for (int c = 0; c < q; ++c)
        if (rem[static_cast<size_t>(c)] != 0) return false;
      return true;
    }
    auto key = std::make_tuple(i, rem, strict);
    auto it = dp.find(key);
    if (it != dp.end()) return it->second;
    dp.emplace(key, false);  // guard

    bool ok = false;
    // empty group
    if (slot_empty(i) && rec(i + 1, rem, true)) ok = true;
    // singleton groups
    for (int c = 0; c < q && !ok; ++c) {
      if (rem[static_cast<size_t>(c)] == 0) continue;
      rem[static_cast<size_t>(c)] -= 1;
      if (slot_single(i, c, false) && rec(i + 1, rem, strict)) ok = true;
      if (!ok && slot_single(i, c, true) && rec(i + 1, rem, true)) ok = true;
      rem[static_cast<size_t>(c)] += 1;
    }
    // larger groups
    if (!ok && a.items()[static_cast<size_t>(i)].is_app()) {
      std::vector<int> v(static_cast<size_t>(q), 0);
      std::function<bool(int, int)> pick = [&](int c, int total) -> bool {
        if (c == q) {
          if (total < 2) return false;
          if (!slot_group(i, v)) return false;
          for (int cc = 0; cc < q; ++cc) rem[static_cast<size_t>(cc)] -= v[static_cast<size_t>(cc)];
          bool r = rec(i + 1, rem, true);
          for (int cc = 0; cc < q; ++cc) rem[static_cast<size_t>(cc)] += v[static_cast<size_t>(cc)];
          return r;
        }
        for (int take = 0; take <= rem[static_cast<size_t>(c)]; ++take) {
          v[static_cast<size_t>(c)] = take;
          if (pick(c + 1, total + take)) return true;
        }
        v[static_cast<size_t>(c)] = 0;
        return false;
      };
      if (pick(0, 0)) ok = true;
    }

    dp[key] = ok;
    return ok;
  };

  std::vector<int> rem = counts;
  return rec(0, rem, false);
}

bool SeqCmp::cmp(const SeqTerm& a, const SeqTerm& b, int l, bool full) {
  if (l <= 0) return false;
  if (a.is_var()) return false;
  auto key = std::make_tuple(a, b, l, full);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  memo_.emplace(key, false);  // guard

  bool r = false;

  if (a.is_app()) {
    // st: some argument sequence dominates or equals b
    for (const SeqTerm& arg : a.items()) {
      if (cmp(arg, b, l, full) || eqi(arg, b)) {
        r = true;
        break;
      }
    }

    if (!r && b.is_app()) {
      int m = static_cast<int>(b.items().size());
      // ia (auxiliary): strictly smaller head symbol, auxiliary recursion
      if (m <= k_ && ns_.gt(a.sym(), b.sym())) {
        bool ok = true;
        for (const SeqTerm& bj : b.items())
          if (!cmp(a, bj, l - 1, false)) {
            ok = false;
            break;
          }
        r = ok;
      }
      // ep (full only): equivalent heads, multiset descent on arguments
      if (!r && full && m <= k_ && ns_.eq(a.sym(), b.sym())) {
        MulCmp mc = multiset_compare(
            a.items(), b.items(),
            [&](const SeqTerm& x, const SeqTerm& y) { return cmp(x, y, l, true); },
            [&](const SeqTerm& x, const SeqTerm& y) { return eqi(x, y); });
        r = mc == MulCmp::StrictGreater;
      }
    }

    if (!r && b.is_list()) {
      int m = static_cast<int>(b.items().size());
      if (m <= a.width() + k_) {
        // ialst: all elements below a at depth l-1; the full order allows one
        // element to be compared with the full order (the recursive call)
        std::vector<int> fails;
        for (int j = 0; j < m; ++j)
          if (!cmp(a, b.items()[static_cast<size_t>(j)], l - 1, false))
            fails.push_back(j);
        if (fails.empty())
          r = true;
        else if (full && fails.size() == 1)
          r = cmp(a, b.items()[static_cast<size_t>(fails[0])], l - 1, true);
      }
    }
  } else if (a.is_list()) {
    r = ms_clause(a, b, l, full);
  }

  memo_[key] = r;
  return r;
}

SlowResult slow_estimate(const SeqTerm& a, int k, const SlowCaps& caps,
                         const NormSignature& ns) {
  if (!a.is_ground()) throw std::invalid_argument("slow_estimate needs a ground term");

  SlowResult result;
  SeqCmp cmp(ns, k);

  // symbol check on the start term
  std::function<bool(const SeqTerm&)> sym_ok = [&](const SeqTerm& t) {
    if (t.is_app()) {
      if (std::find(caps.symbols.begin(), caps.symbols.end(), t.sym()) ==
          caps.symbols.end())
        return false;
    }
    for (const SeqTerm& x : t.items())
      if (!sym_ok(x)) return false;
    return true;
  };
  result.start_in_universe =
      sym_ok(a) && a.sdepth() <= caps.max_depth && a.width() <= caps.max_width;
  if (!result.start_in_universe)
    throw std::invalid_argument("caps too small to contain the start term");

  // universe generated bottom-up: element terms per depth, then sequences as
  // canonical (hash-sorted) multisets up to the width cap
  std::vector<SeqTerm> elems;
  std::vector<SeqTerm> lists;
  lists.push_back(SeqTerm::nil());

  auto lists_over = [&](const std::vector<SeqTerm>& pool) {
    std::vector<SeqTerm> out;
    std::vector<SeqTerm> cur;
    std::function<void(size_t, int)> build = [&](size_t start, int width) {
      out.push_back(SeqTerm::list(cur));
      for (size_t i = start; i < pool.size(); ++i) {
        int w = width + pool[i].width();
        if (w > caps.max_width) continue;
        cur.push_back(pool[i]);
        build(i, w);
        cur.pop_back();
      }
    };
    build(0, 0);
    return out;
  };

  for (int d = 1; d <= caps.max_depth; ++d) {
    std::vector<SeqTerm> arg_pool = lists_over(elems);
    size_t before = elems.size();
    for (int f : caps.symbols) {
      int ar = ns.arity(f);
      std::vector<SeqTerm> argv;
      std::function<void(int, size_t)> pick = [&](int pos, size_t start) {
        if (pos == ar) {
          SeqTerm t = SeqTerm::app(f, argv);
          if (t.sdepth() <= caps.max_depth && t.width() <= caps.max_width) {
            bool fresh = true;
            for (const SeqTerm& e : elems)
              if (cmp.eqi(e, t)) {
                fresh = false;
                break;
              }
            if (fresh) elems.push_back(t);
          }
          return;
        }
        for (size_t i = start; i < arg_pool.size(); ++i) {
          argv.push_back(arg_pool[i]);
          pick(pos + 1, i);  // canonical: nondecreasing choice
          argv.pop_back();
        }
      };
      pick(0, 0);
    }
    if (elems.size() == before && d > 1) break;  // fixed point
  }
  lists = lists_over(elems);

  std::vector<SeqTerm> universe = elems;
  for (const SeqTerm& lst : lists) universe.push_back(lst);
  result.universe_size = universe.size();
  if (universe.size() > 20000)
    throw std::invalid_argument("caps generate an unworkably large universe (" +
                                std::to_string(universe.size()) + " terms)");

  // longest descending chain; the order is well-founded, so a cycle means an
  // implementation bug
  std::unordered_map<SeqTerm, long long, SeqTermHash> best;
  std::unordered_map<SeqTerm, int, SeqTermHash> state;  // 1 = on stack, 2 = done
  std::function<long long(const SeqTerm&)> chain = [&](const SeqTerm& x) -> long long {
    auto it = best.find(x);
    if (it != best.end() && state[x] == 2) return it->second;
    if (state[x] == 1) throw std::logic_error("descending chain contains a cycle");
    state[x] = 1;
    long long len = 0;
    for (const SeqTerm& y : universe) {
      if (y == x) continue;
      // successors obey len(y) <= width(x) + k
      if (seq_len(y) > x.width() + k) continue;
      if (cmp.gpopv(x, y, k)) len = std::max(len, 1 + chain(y));
    }
    state[x] = 2;
    best[x] = len;
    return len;
  };

  result.length = chain(a);
  return result;
}

std::pair<BigInt, BigInt> bound_constants(int k, int p) {
  if (k < 1 || p < 0) throw std::invalid_argument("bound_constants needs k >= 1, p >= 0");
  BigInt c = 1, d = 1;
  using boost::multiprecision::pow;
  // c_{k,0} = k^k, d_{k,0} = k+1
  c = pow(BigInt(k), static_cast<unsigned>(k));
  d = k + 1;
  for (int i = 1; i <= p; ++i) {
    BigInt dk = d * k;
    // exponent of c: sum_{j=1..k} (k*d_{k,i-1})^j; must fit into unsigned
    BigInt expo = 0, t = 1;
    for (int j = 1; j <= k; ++j) {
      t *= dk;
      expo += t;
    }
    if (expo > std::numeric_limits<unsigned>::max())
      throw std::overflow_error("bound constant exponent too large");
    BigInt next_c = pow(c * k, static_cast<unsigned>(expo));
    BigInt next_d = pow(dk, static_cast<unsigned>(k + 1)) + 1;
    c = next_c;
    d = next_d;
  }
  return {c, d};
}

BigInt homo(std::vector<long long> values, int k, const BigInt& c) {
  if (k < 1) throw std::invalid_argument("homo needs k >= 1");
  if (static_cast<int>(values.size()) > k)
    throw std::invalid_argument("homo takes at most k values");
  for (long long v : values)
    if (BigInt(v) >= c) throw std::invalid_argument("homo needs c above every value");
  std::sort(values.begin(), values.end(), std::greater<>());
  BigInt acc = 0;
  using boost::multiprecision::pow;
  for (size_t i = 0; i < values.size(); ++i)
    acc += BigInt(values[i]) * pow(c, static_cast<unsigned>(k - 1 - static_cast<int>(i)));
  return acc;
}

BigInt mslow(const std::vector<long long>& slow_values, int k) {
  long long mx = 0;
  for (long long v : slow_values) mx = std::max(mx, v);
  return homo(slow_values, k, BigInt(mx + 1));
}

EmbeddingOutcome check_embedding(const Trs& trs, const Certificate& cert,
                                 const Rule& rule, const Substitution& sigma,
                                 const std::optional<Term>& context,
                                 const std::string& hole_var, SeqCmp* shared_cmp,
                                 PredInterp* shared_interp) {
  RewriteEngine engine(trs);
  for (const auto& [v, t] : sigma)
    if (!engine.is_normal_form(t))
      throw std::invalid_argument("substitution image '" + v + "' is not a normal form");

  Term lhs = apply_subst(rule.lhs, sigma);
  Term rhs = apply_subst(rule.rhs, sigma);
  if (context) {
    Substitution hole{{hole_var, lhs}};
    Term plugged_lhs = apply_subst(*context, hole);
    hole.insert_or_assign(hole_var, rhs);
    rhs = apply_subst(*context, hole);
    lhs = plugged_lhs;
  }

  std::optional<PredInterp> local_interp;
  if (!shared_interp)
    local_interp.emplace(trs, cert.safe_mapping, cert.precedence);
  PredInterp& interp = shared_interp ? *shared_interp : *local_interp;

  EmbeddingOutcome out;
  out.ell = embedding_parameter(trs, cert.safe_mapping);

  std::optional<SeqCmp> local_cmp;
  if (!shared_cmp) local_cmp.emplace(interp.norm_signature(), out.ell);
  SeqCmp& cmp = shared_cmp ? *shared_cmp : *local_cmp;

  out.s_ok = cmp.gpopv(interp.S(lhs), interp.S(rhs));
  out.n_ok = cmp.gpopv(interp.N(lhs), interp.N(rhs));
  return out;
}

}  // namespace popstar

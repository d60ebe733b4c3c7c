#include "popstar/orders.hpp"

#include <algorithm>
#include <functional>

namespace popstar {

bool term_below(const Term& t, SymbolId f, const Signature& sig, const Precedence& prec) {
  if (t.is_var()) return true;
  if (!prec.gt(sig, f, t.sym())) return false;
  for (const Term& a : t.args())
    if (!term_below(a, f, sig, prec)) return false;
  return true;
}

OrderContext::OrderContext(const Trs& trs, Certificate cert)
    : trs_(trs), cert_(std::move(cert)) {
  const Signature& sig = trs_.signature;
  for (const auto& [f, rank] : cert_.precedence.ranks())
    if (!sig.is_defined(f))
      throw CertificateError("precedence ranks constructor '" + sig.name(f) + "'");
  for (SymbolId f : sig.defined_symbols()) {
    if (!cert_.precedence.has(f))
      throw CertificateError("certificate misses rank for '" + sig.name(f) + "'");
    if (cert_.order_kind != OrderKind::Mpo && !cert_.safe_mapping.has(f))
      throw CertificateError("certificate misses safe mapping for '" + sig.name(f) + "'");
  }
}

// Shared equivalence search for ~s (safe-aware) and the MPO permutation
// equivalence. Returns a trace on success.
bool OrderContext::term_eq(const Term& s, const Term& t, TraceFlavor flavor,
                           TracePtr* out) {
  bool safe_aware = flavor != TraceFlavor::Mpo;
  auto& memo = safe_aware ? eqis_memo_ : mpoeq_memo_;
  Key key{s, t};
  auto it = memo.find(key);
  if (it != memo.end()) {
    if (out) *out = it->second;
    return it->second != nullptr;
  }
  memo.emplace(key, nullptr);  // guard; overwritten below

  TracePtr result;
  if (s == t) {
    auto tr = std::make_shared<Trace>(s, t);
    tr->flavor = flavor;
    tr->kind = TraceKind::EqRefl;
    result = tr;
  } else if (!s.is_var() && !t.is_var() && s.args().size() == t.args().size() &&
             cert_.precedence.eq(trs_.signature, s.sym(), t.sym())) {
    const Signature& sig = trs_.signature;
    int n = static_cast<int>(s.args().size());
    std::vector<int> perm(static_cast<size_t>(n), -1);
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::function<bool(int)> assign = [&](int i) -> bool {
      if (i == n) return true;
      for (int j = 0; j < n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        if (safe_aware && cert_.safe_mapping.is_safe(sig, s.sym(), i + 1) !=
                              cert_.safe_mapping.is_safe(sig, t.sym(), j + 1))
          continue;
        if (!term_eq(s.args()[static_cast<size_t>(i)],
                     t.args()[static_cast<size_t>(j)], flavor, nullptr))
          continue;
        perm[static_cast<size_t>(i)] = j;
        used[static_cast<size_t>(j)] = true;
        if (assign(i + 1)) return true;
        used[static_cast<size_t>(j)] = false;
      }
      return false;
    };
    if (assign(0)) {
      auto tr = std::make_shared<Trace>(s, t);
      tr->flavor = flavor;
      tr->kind = TraceKind::EqPerm;
      tr->perm = perm;
      for (int i = 0; i < n; ++i) {
        TracePtr child;
        term_eq(s.args()[static_cast<size_t>(i)],
                t.args()[static_cast<size_t>(perm[static_cast<size_t>(i)])], flavor,
                &child);
        tr->children.push_back(child);
      }
      result = tr;
    }
  }

  memo[key] = result;
  if (out) *out = result;
  return result != nullptr;
}

bool OrderContext::eqis(const Term& s, const Term& t) {
  return term_eq(s, t, TraceFlavor::Gpop, nullptr);
}

TracePtr OrderContext::eqis_trace(const Term& s, const Term& t) {
  TracePtr tr;
  term_eq(s, t, TraceFlavor::Gpop, &tr);
  return tr;
}

bool OrderContext::gsq(const Term& s, const Term& t) { return gsq_trace(s, t) != nullptr; }

TracePtr OrderContext::gsq_trace(const Term& s, const Term& t) {
  if (s.is_var()) return nullptr;
  Key key{s, t};
  auto it = gsq_memo_.find(key);
  if (it != gsq_memo_.end()) return it->second;
  gsq_memo_.emplace(key, nullptr);

  const Signature& sig = trs_.signature;
  bool f_defined = sig.is_defined(s.sym());
  TracePtr result;

  // clause st: subterm through a normal position (any position for
  // constructor roots), via >= = gsq or ~s
  for (size_t i = 0; i < s.args().size() && !result; ++i) {
    if (f_defined &&
        cert_.safe_mapping.is_safe(sig, s.sym(), static_cast<int>(i) + 1))
      continue;
    TracePtr child = gsq_trace(s.args()[i], t);
    if (!child) term_eq(s.args()[i], t, TraceFlavor::Gpop, &child);
    if (child) {
      auto tr = std::make_shared<Trace>(s, t);
      tr->flavor = TraceFlavor::Gsq;
      tr->kind = TraceKind::St;
      tr->index = static_cast<int>(i);
      tr->children.push_back(child);
      result = tr;
    }
  }

  // clause ia: f defined, f > g, s gsq every argument of t
  if (!result && f_defined && !t.is_var() &&
      cert_.precedence.gt(sig, s.sym(), t.sym())) {
    std::vector<TracePtr> kids;
    bool ok = true;
    for (const Term& tj : t.args()) {
      TracePtr child = gsq_trace(s, tj);
      if (!child) {
        ok = false;
        break;
      }
      kids.push_back(child);
    }
    if (ok) {
      auto tr = std::make_shared<Trace>(s, t);
      tr->flavor = TraceFlavor::Gsq;
      tr->kind = TraceKind::Ia;
      tr->children = std::move(kids);
      result = tr;
    }
  }

  gsq_memo_[key] = result;
  return result;
}

std::optional<std::vector<CoverEdge>> OrderContext::find_cover(
    const std::vector<Term>& lhs, const std::vector<Term>& rhs, TraceFlavor flavor,
    bool need_strict) {
  const size_t n = lhs.size(), m = rhs.size();
  std::vector<std::vector<bool>> can_eq(n, std::vector<bool>(m, false));
  std::vector<std::vector<bool>> can_gt(n, std::vector<bool>(m, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      can_eq[i][j] = term_eq(lhs[i], rhs[j], flavor == TraceFlavor::Mpo ?
                             TraceFlavor::Mpo : TraceFlavor::Gpop, nullptr);
      can_gt[i][j] = order_compare(lhs[i], rhs[j], flavor).result == CmpResult::Greater;
    }

  std::vector<int> mode(n, 0);  // 0 unused, 1 equal, 2 strict
  std::vector<int> target(m, -1);
  std::optional<std::vector<CoverEdge>> found;
  std::function<void(size_t)> go = [&](size_t j) {
    if (found) return;
    if (j == m) {
      bool strict = false;
      for (size_t i = 0; i < n; ++i)
        if (mode[i] != 1) strict = true;
      if (need_strict && !strict) return;
      std::vector<CoverEdge> edges;
      for (size_t jj = 0; jj < m; ++jj)
        edges.push_back(CoverEdge{target[jj], static_cast<int>(jj),
                                  mode[static_cast<size_t>(target[jj])] == 2});
      found = std::move(edges);
      return;
    }
    for (size_t i = 0; i < n && !found; ++i) {
      if (can_gt[i][j] && mode[i] != 1) {
        int saved = mode[i];
        mode[i] = 2;
        target[j] = static_cast<int>(i);
        go(j + 1);
        mode[i] = saved;
      }
      if (can_eq[i][j] && mode[i] == 0) {
        mode[i] = 1;
        target[j] = static_cast<int>(i);
        go(j + 1);
        mode[i] = 0;
      }
    }
  };
  go(0);
  return found;
}

Comparison OrderContext::order_compare(const Term& s, const Term& t, TraceFlavor flavor) {
  int slot = flavor == TraceFlavor::Gpop ? 0 : flavor == TraceFlavor::GpopPs ? 1 : 2;
  Key key{s, t};
  auto it = memo_[slot].find(key);
  if (it != memo_[slot].end()) return it->second;
  memo_[slot].emplace(key, Comparison{});  // guard against re-entry

  const Signature& sig = trs_.signature;
  const SafeMapping& sm = cert_.safe_mapping;
  const Precedence& prec = cert_.precedence;
  bool is_mpo = flavor == TraceFlavor::Mpo;
  Comparison out;

  if (!s.is_var()) {
    // clause st: some argument is >= the right-hand side
    for (size_t i = 0; i < s.args().size() && !out.trace; ++i) {
      Comparison sub = order_compare(s.args()[i], t, flavor);
      TracePtr child = sub.result == CmpResult::Greater ? sub.trace : nullptr;
      if (!child)
        term_eq(s.args()[i], t, is_mpo ? TraceFlavor::Mpo : TraceFlavor::Gpop, &child);
      if (child) {
        auto tr = std::make_shared<Trace>(s, t);
        tr->flavor = flavor;
        tr->kind = TraceKind::St;
        tr->index = static_cast<int>(i);
        tr->children.push_back(child);
        out.trace = tr;
        out.result = CmpResult::Greater;
      }
    }

    bool f_defined = sig.is_defined(s.sym());

    // clause ia: f > g, recursion on the arguments of t; POP* additionally
    // restricts right-hand sides to one safe position outside T(below f, V)
    if (!out.trace && !t.is_var() && (is_mpo || f_defined) &&
        prec.gt(sig, s.sym(), t.sym())) {
      bool ok = true;
      if (!is_mpo) {
        int outside = 0;
        for (size_t j = 0; j < t.args().size(); ++j)
          if (sm.is_safe(sig, t.sym(), static_cast<int>(j) + 1) &&
              !term_below(t.args()[j], s.sym(), sig, prec))
            ++outside;
        if (outside > 1) ok = false;
      }
      std::vector<TracePtr> kids;
      for (size_t j = 0; j < t.args().size() && ok; ++j) {
        TracePtr child;
        if (!is_mpo && !sm.is_safe(sig, t.sym(), static_cast<int>(j) + 1)) {
          child = gsq_trace(s, t.args()[j]);
        } else {
          Comparison sub = order_compare(s, t.args()[j], flavor);
          if (sub.result == CmpResult::Greater) child = sub.trace;
        }
        if (!child) ok = false;
        kids.push_back(child);
      }
      if (ok) {
        auto tr = std::make_shared<Trace>(s, t);
        tr->flavor = flavor;
        tr->kind = TraceKind::Ia;
        tr->children = std::move(kids);
        out.trace = tr;
        out.result = CmpResult::Greater;
      }
    }

    // clause ep: equivalent roots, multiset descent
    if (!out.trace && !t.is_var() && (is_mpo || f_defined) &&
        prec.eq(sig, s.sym(), t.sym())) {
      if (is_mpo) {
        auto cover = find_cover(s.args(), t.args(), flavor, true);
        if (cover) {
          auto tr = std::make_shared<Trace>(s, t);
          tr->flavor = flavor;
          tr->kind = TraceKind::Ep;
          tr->normal_cover = *cover;
          out.trace = tr;
          out.result = CmpResult::Greater;
        }
      } else {
        auto split = [&](const Term& u, bool safe) {
          std::vector<Term> part;
          std::vector<int> pos;
          for (size_t i = 0; i < u.args().size(); ++i)
            if (sm.is_safe(sig, u.sym(), static_cast<int>(i) + 1) == safe) {
              part.push_back(u.args()[i]);
              pos.push_back(static_cast<int>(i));
            }
          return std::make_pair(part, pos);
        };
        auto [s_nrm, s_nrm_pos] = split(s, false);
        auto [s_safe, s_safe_pos] = split(s, true);
        auto [t_nrm, t_nrm_pos] = split(t, false);
        auto [t_safe, t_safe_pos] = split(t, true);

        auto relabel = [](std::vector<CoverEdge> edges, const std::vector<int>& lp,
                          const std::vector<int>& rp) {
          for (CoverEdge& e : edges) {
            e.lhs_pos = lp[static_cast<size_t>(e.lhs_pos)];
            e.rhs_pos = rp[static_cast<size_t>(e.rhs_pos)];
          }
          return edges;
        };

        auto nrm_cover = find_cover(s_nrm, t_nrm, flavor, true);
        if (nrm_cover) {
          auto tr = std::make_shared<Trace>(s, t);
          tr->flavor = flavor;
          tr->kind = TraceKind::Ep;
          tr->normal_cover = relabel(*nrm_cover, s_nrm_pos, t_nrm_pos);
          if (flavor == TraceFlavor::Gpop) {
            auto safe_cover = find_cover(s_safe, t_safe, flavor, false);
            if (safe_cover) {
              tr->safe_cover = relabel(*safe_cover, s_safe_pos, t_safe_pos);
              out.trace = tr;
              out.result = CmpResult::Greater;
            }
          } else {  // parameter substitution: recursion on safe arguments
            bool ok = true;
            for (size_t k = 0; k < t_safe.size() && ok; ++k) {
              if (!term_below(t_safe[k], s.sym(), sig, prec)) {
                ok = false;
                break;
              }
              Comparison sub = order_compare(s, t_safe[k], flavor);
              if (sub.result != CmpResult::Greater) {
                ok = false;
                break;
              }
              tr->children.push_back(sub.trace);
            }
            if (ok) {
              out.trace = tr;
              out.result = CmpResult::Greater;
            }
          }
        }
      }
    }
  }

  if (!out.trace) {
    TracePtr eq;
    term_eq(s, t, is_mpo ? TraceFlavor::Mpo : TraceFlavor::Gpop, &eq);
    if (eq) {
      out.result = CmpResult::EquivalentSafe;
      out.trace = eq;
    } else {
      out.result = CmpResult::Incomparable;
    }
  }

  memo_[slot][key] = out;
  return out;
}

Comparison OrderContext::gpop(const Term& s, const Term& t) {
  return order_compare(s, t, TraceFlavor::Gpop);
}

Comparison OrderContext::gpopps(const Term& s, const Term& t) {
  return order_compare(s, t, TraceFlavor::GpopPs);
}

Comparison OrderContext::mpo_compare(const Term& s, const Term& t) {
  return order_compare(s, t, TraceFlavor::Mpo);
}

bool OrderContext::mpo(const Term& s, const Term& t) {
  return mpo_compare(s, t).result == CmpResult::Greater;
}

Comparison OrderContext::compare(const Term& s, const Term& t) {
  switch (cert_.order_kind) {
    case OrderKind::Pop: return gpop(s, t);
    case OrderKind::PopPs: return gpopps(s, t);
    case OrderKind::Mpo: return mpo_compare(s, t);
  }
  return {};
}

bool OrderContext::replay(const TracePtr& tr) {
  if (!tr) return false;
  const Signature& sig = trs_.signature;
  const SafeMapping& sm = cert_.safe_mapping;
  const Precedence& prec = cert_.precedence;
  const Term& s = tr->lhs;
  const Term& t = tr->rhs;
  bool safe_aware = tr->flavor != TraceFlavor::Mpo;

  auto child_is_eq = [](const TracePtr& c) {
    return c->kind == TraceKind::EqRefl || c->kind == TraceKind::EqPerm;
  };

  switch (tr->kind) {
    case TraceKind::EqRefl:
      return s == t;
    case TraceKind::EqPerm: {
      if (s.is_var() || t.is_var()) return false;
      if (s.args().size() != t.args().size()) return false;
      if (!prec.eq(sig, s.sym(), t.sym())) return false;
      size_t n = s.args().size();
      if (tr->perm.size() != n || tr->children.size() != n) return false;
      std::vector<bool> used(n, false);
      for (size_t i = 0; i < n; ++i) {
        int j = tr->perm[i];
        if (j < 0 || static_cast<size_t>(j) >= n || used[static_cast<size_t>(j)])
          return false;
        used[static_cast<size_t>(j)] = true;
        if (safe_aware && sm.is_safe(sig, s.sym(), static_cast<int>(i) + 1) !=
                              sm.is_safe(sig, t.sym(), j + 1))
          return false;
        const TracePtr& c = tr->children[i];
        if (!c || !(c->lhs == s.args()[i]) ||
            !(c->rhs == t.args()[static_cast<size_t>(j)]) || !replay(c))
          return false;
      }
      return true;
    }
    case TraceKind::St: {
      if (s.is_var()) return false;
      if (tr->index < 0 || static_cast<size_t>(tr->index) >= s.args().size())
        return false;
      if (tr->flavor == TraceFlavor::Gsq && sig.is_defined(s.sym()) &&
          sm.is_safe(sig, s.sym(), tr->index + 1))
        return false;
      const TracePtr& c = tr->children.at(0);
      if (!c || !(c->lhs == s.args()[static_cast<size_t>(tr->index)]) || !(c->rhs == t))
        return false;
      return replay(c);
    }
    case TraceKind::Ia: {
      if (s.is_var() || t.is_var()) return false;
      if (tr->flavor != TraceFlavor::Mpo && !sig.is_defined(s.sym())) return false;
      if (!prec.gt(sig, s.sym(), t.sym())) return false;
      if (tr->children.size() != t.args().size()) return false;
      if (tr->flavor == TraceFlavor::Gpop || tr->flavor == TraceFlavor::GpopPs) {
        int outside = 0;
        for (size_t j = 0; j < t.args().size(); ++j)
          if (sm.is_safe(sig, t.sym(), static_cast<int>(j) + 1) &&
              !term_below(t.args()[j], s.sym(), sig, prec))
            ++outside;
        if (outside > 1) return false;
      }
      for (size_t j = 0; j < t.args().size(); ++j) {
        const TracePtr& c = tr->children[j];
        if (!c) return false;
        bool expect_gsq = (tr->flavor == TraceFlavor::Gpop ||
                           tr->flavor == TraceFlavor::GpopPs) &&
                          !sm.is_safe(sig, t.sym(), static_cast<int>(j) + 1);
        bool expect_gsq_for_gsq = tr->flavor == TraceFlavor::Gsq;
        if ((expect_gsq || expect_gsq_for_gsq) && c->flavor != TraceFlavor::Gsq &&
            !child_is_eq(c))
          return false;
        if (!(c->lhs == s) || !(c->rhs == t.args()[j])) return false;
        if (!replay(c)) return false;
      }
      return true;
    }
    case TraceKind::Ep: {
      if (s.is_var() || t.is_var()) return false;
      if (tr->flavor != TraceFlavor::Mpo && !sig.is_defined(s.sym())) return false;
      if (!prec.eq(sig, s.sym(), t.sym())) return false;

      auto check_cover = [&](const std::vector<CoverEdge>& edges, bool lhs_safe,
                             bool need_strict) {
        // every relevant rhs position covered exactly once
        std::vector<int> covered(t.args().size(), 0);
        std::vector<int> eq_uses(s.args().size(), 0);
        std::vector<int> any_uses(s.args().size(), 0);
        std::vector<bool> strict_use(s.args().size(), false);
        for (const CoverEdge& e : edges) {
          if (e.lhs_pos < 0 || static_cast<size_t>(e.lhs_pos) >= s.args().size())
            return false;
          if (e.rhs_pos < 0 || static_cast<size_t>(e.rhs_pos) >= t.args().size())
            return false;
          if (tr->flavor != TraceFlavor::Mpo) {
            if (sm.is_safe(sig, s.sym(), e.lhs_pos + 1) != lhs_safe) return false;
            if (sm.is_safe(sig, t.sym(), e.rhs_pos + 1) != lhs_safe) return false;
          }
          covered[static_cast<size_t>(e.rhs_pos)] += 1;
          any_uses[static_cast<size_t>(e.lhs_pos)] += 1;
          const Term& a = s.args()[static_cast<size_t>(e.lhs_pos)];
          const Term& b = t.args()[static_cast<size_t>(e.rhs_pos)];
          if (e.strict) {
            strict_use[static_cast<size_t>(e.lhs_pos)] = true;
            if (order_compare(a, b, tr->flavor).result != CmpResult::Greater)
              return false;
          } else {
            eq_uses[static_cast<size_t>(e.lhs_pos)] += 1;
            if (!term_eq(a, b,
                         tr->flavor == TraceFlavor::Mpo ? TraceFlavor::Mpo
                                                        : TraceFlavor::Gpop,
                         nullptr))
              return false;
          }
        }
        for (size_t j = 0; j < t.args().size(); ++j) {
          bool relevant = tr->flavor == TraceFlavor::Mpo ||
                          sm.is_safe(sig, t.sym(), static_cast<int>(j) + 1) == lhs_safe;
          if (relevant && covered[j] != 1) return false;
        }
        for (size_t i = 0; i < s.args().size(); ++i) {
          if (eq_uses[i] > 1) return false;
          if (eq_uses[i] == 1 && strict_use[i]) return false;
        }
        if (need_strict) {
          bool strict = false;
          for (size_t i = 0; i < s.args().size(); ++i) {
            bool relevant = tr->flavor == TraceFlavor::Mpo ||
                            sm.is_safe(sig, s.sym(), static_cast<int>(i) + 1) == lhs_safe;
            if (relevant && eq_uses[i] == 0) strict = true;
          }
          if (!strict) return false;
        }
        return true;
      };

      if (tr->flavor == TraceFlavor::Mpo)
        return check_cover(tr->normal_cover, false, true);
      if (!check_cover(tr->normal_cover, false, true)) return false;
      if (tr->flavor == TraceFlavor::Gpop)
        return check_cover(tr->safe_cover, true, false);
      // parameter substitution: every safe argument below f and dominated
      size_t k = 0;
      for (size_t j = 0; j < t.args().size(); ++j) {
        if (!sm.is_safe(sig, t.sym(), static_cast<int>(j) + 1)) continue;
        if (!term_below(t.args()[j], s.sym(), sig, prec)) return false;
        if (k >= tr->children.size()) return false;
        const TracePtr& c = tr->children[k++];
        if (!c || !(c->lhs == s) || !(c->rhs == t.args()[j]) || !replay(c))
          return false;
      }
      return k == tr->children.size();
    }
  }
  return false;
}

bool mpo(const Term& s, const Term& t, const Signature& sig, const Precedence& prec) {
  Trs dummy;
  dummy.signature = sig;
  Certificate cert;
  cert.precedence = prec;
  cert.order_kind = OrderKind::Mpo;
  OrderContext ctx(dummy, cert);
  return ctx.mpo(s, t);
}

VerifyReport verify_certificate(const Trs& trs, const Certificate& cert) {
  VerifyReport report;
  if (!is_constructor_trs(trs)) {
    report.error = "not a constructor TRS (some left-hand side is not basic)";
    return report;
  }
  std::unique_ptr<OrderContext> ctx;
  try {
    ctx = std::make_unique<OrderContext>(trs, cert);
  } catch (const CertificateError& e) {
    report.error = e.what();
    return report;
  }
  report.success = true;
  for (size_t i = 0; i < trs.rules.size(); ++i) {
    RuleVerdict v;
    v.rule_index = i;
    v.cmp = ctx->compare(trs.rules[i].lhs, trs.rules[i].rhs);
    if (v.cmp.result != CmpResult::Greater) report.success = false;
    report.rules.push_back(std::move(v));
  }
  return report;
}

}  // namespace popstar

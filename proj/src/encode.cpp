#include "popstar/encode.hpp"

#include <algorithm>
#include <cmath>

namespace popstar {

using F = PropFormula;

Encoder::Encoder(const Trs& trs, EncodeOptions opts) : trs_(trs), opts_(opts) {
  size_t d = trs_.signature.defined_symbols().size();
  rank_bits_ = 1;
  while ((1u << rank_bits_) < d) ++rank_bits_;
}

PropFormula Encoder::safe_pos(SymbolId f, int i) {
  if (trs_.signature.is_constructor(f)) return F::ftrue();
  return F::atom(reg_.safe_atom(f, i));
}

PropFormula Encoder::prec_gt(SymbolId f, SymbolId g) {
  const Signature& sig = trs_.signature;
  bool fd = sig.is_defined(f), gd = sig.is_defined(g);
  if (fd && !gd) return F::ftrue();
  if (!fd) return F::ffalse();
  if (f == g) return F::ffalse();
  return F::atom(reg_.gt_atom(f, g));
}

PropFormula Encoder::prec_eq(SymbolId f, SymbolId g) {
  const Signature& sig = trs_.signature;
  bool fd = sig.is_defined(f), gd = sig.is_defined(g);
  if (!fd && !gd) return F::ftrue();
  if (fd != gd) return F::ffalse();
  if (f == g) return F::ftrue();
  return F::atom(reg_.eq_atom(f, g));
}

PropFormula Encoder::bits_gt(SymbolId f, SymbolId g) {
  // unsigned comparison of the rank bit-vectors, msb first
  std::vector<F> cases;
  for (int i = rank_bits_ - 1; i >= 0; --i) {
    std::vector<F> conj;
    for (int j = rank_bits_ - 1; j > i; --j)
      conj.push_back(F::iff(F::atom(reg_.rank_bit(f, j)), F::atom(reg_.rank_bit(g, j))));
    conj.push_back(F::atom(reg_.rank_bit(f, i)));
    conj.push_back(F::negf(F::atom(reg_.rank_bit(g, i))));
    cases.push_back(F::conj(std::move(conj)));
  }
  return F::disj(std::move(cases));
}

PropFormula Encoder::bits_eq(SymbolId f, SymbolId g) {
  std::vector<F> conj;
  for (int i = 0; i < rank_bits_; ++i)
    conj.push_back(F::iff(F::atom(reg_.rank_bit(f, i)), F::atom(reg_.rank_bit(g, i))));
  return F::conj(std::move(conj));
}

PropFormula Encoder::encode_precedence() {
  std::vector<F> parts;
  for (SymbolId f : trs_.signature.defined_symbols())
    for (SymbolId g : trs_.signature.defined_symbols()) {
      if (f == g) continue;
      parts.push_back(F::implies(F::atom(reg_.gt_atom(f, g)), bits_gt(f, g)));
      parts.push_back(F::implies(F::atom(reg_.eq_atom(f, g)), bits_eq(f, g)));
    }
  return F::conj(std::move(parts));
}

PropFormula Encoder::cmp(const Term& s, const Term& t, Flavor fl) {
  if (!opts_.memoize) return build(s, t, fl);
  CmpKey key{s, t, static_cast<int>(fl)};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  F body = build(s, t, fl);
  F result = body;
  // only composite formulas earn a definition atom
  if (body.op() != F::Op::True && body.op() != F::Op::False &&
      body.op() != F::Op::Atom) {
    static const char* names[] = {"eqis", "eqmpo", "gsq", "pop", "popps", "mpo"};
    AtomId d = reg_.delta_atom(std::string(names[static_cast<int>(fl)]) + ":" +
                               to_string(s, trs_.signature) + ">" +
                               to_string(t, trs_.signature));
    definitions_.push_back(F::implies(F::atom(d), body));
    result = F::atom(d);
  }
  memo_.emplace(key, result);
  return result;
}

PropFormula Encoder::build(const Term& s, const Term& t, Flavor fl) {
  switch (fl) {
    case Flavor::Eqis: return build_eq(s, t, true);
    case Flavor::EqMpo: return build_eq(s, t, false);
    case Flavor::Gsq: return build_gsq(s, t);
    default: return build_order(s, t, fl);
  }
}

PropFormula Encoder::build_eq(const Term& s, const Term& t, bool safe_aware) {
  if (s == t) return F::ftrue();
  if (s.is_var() || t.is_var()) return F::ffalse();
  if (s.args().size() != t.args().size()) return F::ffalse();
  int n = static_cast<int>(s.args().size());
  std::vector<F> parts{prec_eq(s.sym(), t.sym())};
  if (n > 0) {
    int site = reg_.fresh_site();
    // pi reflects a permutation: exactly one target per row and per column
    for (int i = 0; i < n; ++i) {
      std::vector<F> row;
      for (int j = 0; j < n; ++j) row.push_back(F::atom(reg_.perm_atom(site, i, j)));
      parts.push_back(exactly_one(row, reg_));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<F> col;
      for (int i = 0; i < n; ++i) col.push_back(F::atom(reg_.perm_atom(site, i, j)));
      parts.push_back(exactly_one(col, reg_));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        F rec = cmp(s.args()[static_cast<size_t>(i)], t.args()[static_cast<size_t>(j)],
                    safe_aware ? Flavor::Eqis : Flavor::EqMpo);
        F cond = rec;
        if (safe_aware)
          cond = F::conj({rec, F::iff(safe_pos(s.sym(), i + 1), safe_pos(t.sym(), j + 1))});
        parts.push_back(F::implies(F::atom(reg_.perm_atom(site, i, j)), cond));
      }
  }
  return F::conj(std::move(parts));
}

PropFormula Encoder::build_gsq(const Term& s, const Term& t) {
  if (s.is_var()) return F::ffalse();
  const Signature& sig = trs_.signature;
  bool f_defined = sig.is_defined(s.sym());

  std::vector<F> alts;
  // st
  {
    std::vector<F> sub;
    for (int i = 0; i < static_cast<int>(s.args().size()); ++i) {
      const Term& si = s.args()[static_cast<size_t>(i)];
      F geq = F::disj({cmp(si, t, Flavor::Gsq), cmp(si, t, Flavor::Eqis)});
      F guard = f_defined ? F::negf(safe_pos(s.sym(), i + 1)) : F::ftrue();
      sub.push_back(F::conj({geq, guard}));
    }
    alts.push_back(F::disj(std::move(sub)));
  }
  // ia
  if (!t.is_var() && f_defined) {
    std::vector<F> conj{prec_gt(s.sym(), t.sym())};
    for (const Term& tj : t.args()) conj.push_back(cmp(s, tj, Flavor::Gsq));
    alts.push_back(F::conj(std::move(conj)));
  }
  return F::disj(std::move(alts));
}

PropFormula Encoder::encode_below(const Term& t, SymbolId f) {
  if (t.is_var()) return F::ftrue();
  std::vector<F> conj{prec_gt(f, t.sym())};
  for (const Term& a : t.args()) conj.push_back(encode_below(a, f));
  return F::conj(std::move(conj));
}

PropFormula Encoder::build_order(const Term& s, const Term& t, Flavor fl) {
  if (s.is_var()) return F::ffalse();
  const Signature& sig = trs_.signature;
  bool is_mpo = fl == Flavor::Mpo;
  Flavor eqfl = is_mpo ? Flavor::EqMpo : Flavor::Eqis;
  bool f_defined = sig.is_defined(s.sym());

  std::vector<F> alts;

  // st: some argument weakly dominates t
  {
    std::vector<F> sub;
    for (const Term& si : s.args())
      sub.push_back(F::disj({cmp(si, t, fl), cmp(si, t, eqfl)}));
    alts.push_back(F::disj(std::move(sub)));
  }

  if (!t.is_var() && (is_mpo || f_defined)) {
    int m = static_cast<int>(t.args().size());

    // ia
    {
      std::vector<F> conj{prec_gt(s.sym(), t.sym())};
      if (is_mpo) {
        for (const Term& tj : t.args()) conj.push_back(cmp(s, tj, fl));
      } else {
        for (int j = 0; j < m; ++j) {
          const Term& tj = t.args()[static_cast<size_t>(j)];
          conj.push_back(F::implies(safe_pos(t.sym(), j + 1), cmp(s, tj, fl)));
          conj.push_back(
              F::implies(F::negf(safe_pos(t.sym(), j + 1)), cmp(s, tj, Flavor::Gsq)));
        }
        if (m > 0) {
          int site = reg_.fresh_site();
          std::vector<F> alphas;
          for (int j = 0; j < m; ++j) alphas.push_back(F::atom(reg_.alpha_atom(site, j)));
          conj.push_back(zero_or_one(alphas, reg_));
          for (int j = 0; j < m; ++j)
            conj.push_back(F::implies(F::negf(alphas[static_cast<size_t>(j)]),
                                      encode_below(t.args()[static_cast<size_t>(j)],
                                                   s.sym())));
        }
      }
      alts.push_back(F::conj(std::move(conj)));
    }

    // ep
    {
      int n = static_cast<int>(s.args().size());
      std::vector<F> conj{prec_eq(s.sym(), t.sym())};
      int site = reg_.fresh_site();
      auto gamma = [&](int i, int j) { return F::atom(reg_.gamma_atom(site, i, j)); };
      auto eps = [&](int i) { return F::atom(reg_.epsilon_atom(site, i)); };

      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
          const Term& si = s.args()[static_cast<size_t>(i)];
          const Term& tj = t.args()[static_cast<size_t>(j)];
          std::vector<F> edge;
          edge.push_back(F::implies(eps(i), cmp(si, tj, eqfl)));
          edge.push_back(F::implies(F::negf(eps(i)), cmp(si, tj, fl)));
          if (fl == Flavor::Pop)
            edge.push_back(F::iff(safe_pos(s.sym(), i + 1), safe_pos(t.sym(), j + 1)));
          if (fl == Flavor::PopPs) {
            edge.push_back(F::negf(safe_pos(s.sym(), i + 1)));
            edge.push_back(F::negf(safe_pos(t.sym(), j + 1)));
          }
          conj.push_back(F::implies(gamma(i, j), F::conj(std::move(edge))));
        }

      for (int j = 0; j < m; ++j) {
        std::vector<F> col;
        for (int i = 0; i < n; ++i) col.push_back(gamma(i, j));
        F covered = exactly_one(col, reg_);
        if (fl == Flavor::PopPs)
          conj.push_back(F::implies(F::negf(safe_pos(t.sym(), j + 1)), covered));
        else
          conj.push_back(covered);
      }

      if (fl == Flavor::PopPs) {
        // computation on safe positions: recursion plus the below-check
        for (int j = 0; j < m; ++j) {
          const Term& tj = t.args()[static_cast<size_t>(j)];
          conj.push_back(F::implies(
              safe_pos(t.sym(), j + 1),
              F::conj({cmp(s, tj, fl), encode_below(tj, s.sym())})));
        }
      }

      for (int i = 0; i < n; ++i) {
        std::vector<F> row;
        for (int j = 0; j < m; ++j) row.push_back(gamma(i, j));
        conj.push_back(F::implies(eps(i), exactly_one(row, reg_)));
      }

      std::vector<F> strict;
      for (int i = 0; i < n; ++i) {
        if (is_mpo)
          strict.push_back(F::negf(eps(i)));
        else
          strict.push_back(F::conj({F::negf(safe_pos(s.sym(), i + 1)), F::negf(eps(i))}));
      }
      conj.push_back(F::disj(std::move(strict)));

      alts.push_back(F::conj(std::move(conj)));
    }
  }

  return F::disj(std::move(alts));
}

PropFormula Encoder::encode_eqis(const Term& s, const Term& t) {
  return cmp(s, t, Flavor::Eqis);
}
PropFormula Encoder::encode_gsq(const Term& s, const Term& t) {
  return cmp(s, t, Flavor::Gsq);
}
PropFormula Encoder::encode_gpop(const Term& s, const Term& t) {
  return cmp(s, t, Flavor::Pop);
}
PropFormula Encoder::encode_gpopps(const Term& s, const Term& t) {
  return cmp(s, t, Flavor::PopPs);
}
PropFormula Encoder::encode_mpo(const Term& s, const Term& t) {
  return cmp(s, t, Flavor::Mpo);
}

PropFormula Encoder::order_main(const Term& s, const Term& t) {
  switch (opts_.order) {
    case OrderKind::Pop: return encode_gpop(s, t);
    case OrderKind::PopPs: return encode_gpopps(s, t);
    case OrderKind::Mpo: return encode_mpo(s, t);
  }
  return F::ffalse();
}

PropFormula Encoder::encode_rule(const Rule& r) { return order_main(r.lhs, r.rhs); }

PropFormula Encoder::encode_problem() {
  if (!is_constructor_trs(trs_))
    throw SignatureError("not a constructor TRS; refusing to encode");
  std::vector<F> parts{encode_precedence()};
  for (const Rule& r : trs_.rules) parts.push_back(encode_rule(r));
  for (const F& d : definitions_) parts.push_back(d);
  return F::conj(std::move(parts));
}

Certificate Encoder::decode(const Model& m, const CnfInstance& cnf) const {
  Certificate cert;
  cert.order_kind = opts_.order;
  const Signature& sig = trs_.signature;
  for (SymbolId f : sig.defined_symbols()) {
    int rank = 0;
    for (size_t a = 0; a < reg_.size(); ++a) {
      const AtomInfo& info = reg_.info(static_cast<AtomId>(a));
      if (info.kind == AtomKind::RankBit && info.f == f &&
          m.atom(cnf, static_cast<AtomId>(a)))
        rank |= 1 << info.i;
    }
    cert.precedence.set_rank(f, rank);
    std::set<int> safe;
    for (size_t a = 0; a < reg_.size(); ++a) {
      const AtomInfo& info = reg_.info(static_cast<AtomId>(a));
      if (info.kind == AtomKind::Safe && info.f == f &&
          m.atom(cnf, static_cast<AtomId>(a)))
        safe.insert(info.i);
    }
    cert.safe_mapping.set(f, safe);
  }
  return cert;
}

std::vector<int> Encoder::induced_assumptions(const Certificate& cert,
                                              const CnfInstance& cnf) const {
  const Signature& sig = trs_.signature;
  // compress ranks order-preservingly into the available bit width
  std::vector<int> values;
  for (const auto& [f, r] : cert.precedence.ranks()) values.push_back(r);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto compressed = [&](SymbolId f) {
    int r = cert.precedence.rank(f);
    return static_cast<int>(std::lower_bound(values.begin(), values.end(), r) -
                            values.begin());
  };

  std::vector<int> units;
  for (size_t a = 0; a < reg_.size(); ++a) {
    AtomId id = static_cast<AtomId>(a);
    const AtomInfo& info = reg_.info(id);
    int var = cnf.var_of(id);
    if (var == 0) continue;
    switch (info.kind) {
      case AtomKind::Safe:
        units.push_back(cert.safe_mapping.is_safe(sig, info.f, info.i) ? var : -var);
        break;
      case AtomKind::Gt:
        units.push_back(cert.precedence.gt(sig, info.f, info.g) ? var : -var);
        break;
      case AtomKind::Eq:
        units.push_back(cert.precedence.eq(sig, info.f, info.g) ? var : -var);
        break;
      case AtomKind::RankBit:
        units.push_back((compressed(info.f) >> info.i) & 1 ? var : -var);
        break;
      default: break;
    }
  }
  return units;
}

}  // namespace popstar

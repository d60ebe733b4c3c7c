#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "popstar/cnf.hpp"
#include "popstar/prop.hpp"
#include "popstar/term.hpp"

namespace popstar {

struct EncodeOptions {
  OrderKind order = OrderKind::Pop;
  bool memoize = true;  // share repeated subcomparisons through delta atoms
};

// Propositional encoding of "the TRS is compatible with the order for some
// admissible precedence and safe mapping". Precedences are rank vectors of
// ceil(log2 |D|) bits; constructors are equivalent and minimal.
class Encoder {
 public:
  Encoder(const Trs& trs, EncodeOptions opts);

  PropFormula encode_precedence();
  PropFormula encode_eqis(const Term& s, const Term& t);
  PropFormula encode_gsq(const Term& s, const Term& t);
  PropFormula encode_below(const Term& t, SymbolId f);
  PropFormula encode_gpop(const Term& s, const Term& t);
  PropFormula encode_gpopps(const Term& s, const Term& t);
  PropFormula encode_mpo(const Term& s, const Term& t);
  // Main-order comparison including accumulated definitions.
  PropFormula encode_rule(const Rule& r);

  // vprec /\ conjunction over rules /\ delta definitions. Throws
  // SignatureError for non-constructor systems.
  PropFormula encode_problem();

  AtomRegistry& registry() { return reg_; }
  const AtomRegistry& registry() const { return reg_; }
  int rank_bits() const { return rank_bits_; }

  Certificate decode(const Model& m, const CnfInstance& cnf) const;
  // Unit assumptions fixing precedence/safe atoms to the values a concrete
  // certificate induces (rank values compressed order-preservingly).
  std::vector<int> induced_assumptions(const Certificate& cert,
                                       const CnfInstance& cnf) const;

 private:
  enum class Flavor { Eqis, EqMpo, Gsq, Pop, PopPs, Mpo };
  PropFormula cmp(const Term& s, const Term& t, Flavor fl);
  PropFormula build(const Term& s, const Term& t, Flavor fl);
  PropFormula build_eq(const Term& s, const Term& t, bool safe_aware);
  PropFormula build_gsq(const Term& s, const Term& t);
  PropFormula build_order(const Term& s, const Term& t, Flavor fl);
  PropFormula prec_gt(SymbolId f, SymbolId g);
  PropFormula prec_eq(SymbolId f, SymbolId g);
  PropFormula safe_pos(SymbolId f, int i);
  PropFormula bits_gt(SymbolId f, SymbolId g);
  PropFormula bits_eq(SymbolId f, SymbolId g);
  PropFormula order_main(const Term& s, const Term& t);

  const Trs& trs_;
  EncodeOptions opts_;
  AtomRegistry reg_;
  int rank_bits_ = 1;
  std::vector<PropFormula> definitions_;

  struct CmpKey {
    Term s, t;
    int fl;
    bool operator==(const CmpKey& o) const {
      return fl == o.fl && s == o.s && t == o.t;
    }
  };
  struct CmpKeyHash {
    size_t operator()(const CmpKey& k) const {
      return k.s.hash() * 0x9e3779b97f4a7c15ULL + k.t.hash() * 31 +
             static_cast<size_t>(k.fl);
    }
  };
  std::unordered_map<CmpKey, PropFormula, CmpKeyHash> memo_;
};

}  // namespace popstar

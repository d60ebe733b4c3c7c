#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "popstar/term.hpp"

namespace popstar {

using AtomId = int32_t;

enum class AtomKind {
  Safe,      // argument position of f is safe
  Gt,        // f strictly above g
  Eq,        // f equivalent to g
  RankBit,   // bit b of the rank of f
  Perm,      // permutation atom at a comparison site
  Alpha,     // marks the one safe position allowed outside T(below f, V)
  Gamma,     // multiset cover edge
  Epsilon,   // left element covers equally
  Delta,     // memoised subcomparison
  Aux        // fresh variable (CNF definitions, cardinality ladders)
};

struct AtomInfo {
  AtomKind kind = AtomKind::Aux;
  SymbolId f = -1, g = -1;
  int i = -1, j = -1;
  int site = -1;
  std::string note;
};

class AtomRegistry {
 public:
  AtomId safe_atom(SymbolId f, int i);
  AtomId gt_atom(SymbolId f, SymbolId g);
  AtomId eq_atom(SymbolId f, SymbolId g);
  AtomId rank_bit(SymbolId f, int bit);
  AtomId perm_atom(int site, int i, int j);
  AtomId alpha_atom(int site, int j);
  AtomId gamma_atom(int site, int i, int j);
  AtomId epsilon_atom(int site, int i);
  AtomId delta_atom(const std::string& note);
  AtomId fresh(const std::string& note);

  int fresh_site() { return next_site_++; }
  const AtomInfo& info(AtomId a) const { return atoms_.at(static_cast<size_t>(a)); }
  size_t size() const { return atoms_.size(); }
  std::string describe(AtomId a, const Signature& sig) const;

 private:
  AtomId intern(const AtomInfo& info, const std::tuple<int, int, int, int, int>& key);
  std::vector<AtomInfo> atoms_;
  std::map<std::tuple<int, int, int, int, int>, AtomId> index_;
  int next_site_ = 0;
};

// Propositional formulas with truth constants; construction applies constant
// absorption, idempotence and double-negation elimination, nothing deeper.
class PropFormula {
 public:
  enum class Op { True, False, Atom, Not, And, Or, Implies, Iff };

  static PropFormula ftrue();
  static PropFormula ffalse();
  static PropFormula atom(AtomId a);
  static PropFormula negf(PropFormula f);
  static PropFormula conj(std::vector<PropFormula> fs);
  static PropFormula disj(std::vector<PropFormula> fs);
  static PropFormula implies(PropFormula a, PropFormula b);
  static PropFormula iff(PropFormula a, PropFormula b);
  static PropFormula cond(bool b) { return b ? ftrue() : ffalse(); }

  Op op() const { return n_->op; }
  AtomId atom_id() const { return n_->atom; }
  const std::vector<PropFormula>& kids() const { return n_->kids; }
  size_t hash() const { return n_->hash; }
  bool is_true() const { return n_->op == Op::True; }
  bool is_false() const { return n_->op == Op::False; }
  bool same_node(const PropFormula& o) const { return n_ == o.n_; }

  size_t tree_size() const;
  // Truth-table style evaluation under a complete assignment.
  bool eval(const std::vector<bool>& assignment) const;
  void collect_atoms(std::vector<AtomId>& out) const;

 private:
  struct Node {
    Op op = Op::True;
    AtomId atom = -1;
    std::vector<PropFormula> kids;
    size_t hash = 0;
  };
  explicit PropFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static PropFormula make(Op op, AtomId atom, std::vector<PropFormula> kids);
  std::shared_ptr<const Node> n_;
};

// Cardinality helpers. Pairwise encodings for small inputs, a sequential
// counter ladder above; the threshold keeps instances predictable.
PropFormula exactly_one(const std::vector<PropFormula>& xs, AtomRegistry& reg);
PropFormula zero_or_one(const std::vector<PropFormula>& xs, AtomRegistry& reg);

}  // namespace popstar

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "popstar/rewrite.hpp"
#include "popstar/term.hpp"

namespace popstar {

// Normalised signature: one symbol f^n per original symbol, with arity the
// number of normal positions of f. Precedence ranks are inherited; the tally
// constant (star) sits strictly below everything, constructors form one
// equivalence class below all defined symbols.
class NormSignature {
 public:
  int add(const std::string& name, int arity, int rank);
  int add_star(int rank) { return star_ = add("*", 0, rank); }
  int star() const { return star_; }

  static NormSignature from(const Signature& sig, const SafeMapping& sm,
                            const Precedence& prec);

  int arity(int f) const { return syms_[static_cast<size_t>(f)].arity; }
  const std::string& name(int f) const { return syms_[static_cast<size_t>(f)].name; }
  int rank(int f) const { return syms_[static_cast<size_t>(f)].rank; }
  bool gt(int f, int g) const { return rank(f) > rank(g); }
  bool eq(int f, int g) const { return rank(f) == rank(g); }
  size_t size() const { return syms_.size(); }
  int max_arity() const;
  // Original SymbolId -> normalised id; valid for signatures built via from().
  int of(SymbolId f) const { return static_cast<int>(f); }

 private:
  struct NSym {
    std::string name;
    int arity;
    int rank;
  };
  std::vector<NSym> syms_;
  int star_ = -1;
};

// Terms with sequence arguments: variables, applications of normalised
// symbols to sequences, and sequences of terms. Sequences never nest
// directly; concatenation flattens.
class SeqTerm {
 public:
  enum class Kind { Var, App, List };

  static SeqTerm var(const std::string& name);
  static SeqTerm app(int sym, std::vector<SeqTerm> args);
  static SeqTerm list(std::vector<SeqTerm> elems);
  static SeqTerm nil() { return list({}); }
  static SeqTerm star(const NormSignature& ns) { return app(ns.star(), {}); }

  Kind kind() const { return n_->kind; }
  bool is_var() const { return n_->kind == Kind::Var; }
  bool is_app() const { return n_->kind == Kind::App; }
  bool is_list() const { return n_->kind == Kind::List; }
  const std::string& var_name() const { return n_->var; }
  int sym() const { return n_->sym; }
  // App: argument sequences; List: element terms.
  const std::vector<SeqTerm>& items() const { return n_->items; }

  int width() const { return n_->width; }
  int sdepth() const { return n_->depth; }
  bool is_ground() const { return n_->ground; }
  size_t hash() const { return n_->hash; }

  bool operator==(const SeqTerm& o) const;
  bool operator!=(const SeqTerm& o) const { return !(*this == o); }

 private:
  struct Node {
    Kind kind = Kind::List;
    std::string var;
    int sym = -1;
    std::vector<SeqTerm> items;
    int width = 0;
    int depth = 0;
    bool ground = true;
    size_t hash = 0;
  };
  explicit SeqTerm(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct SeqTermHash {
  size_t operator()(const SeqTerm& t) const { return t.hash(); }
};

// tolst-based length: element count after list coercion.
int seq_len(const SeqTerm& a);
int seq_width(const SeqTerm& a);
SeqTerm concat(const SeqTerm& a, const SeqTerm& b);
std::vector<SeqTerm> to_elements(const SeqTerm& a);

SeqTerm tally(int n, const NormSignature& ns);

std::string to_string(const SeqTerm& t, const NormSignature& ns);

// norm: depth that disregards normal argument positions.
int norm(const Term& t, const Signature& sig, const SafeMapping& sm);

// Predicative interpretation S/N for a TRS: S erases normal forms, N appends
// the norm as a tally sequence.
class PredInterp {
 public:
  PredInterp(const Trs& trs, const SafeMapping& sm, const Precedence& prec);

  SeqTerm S(const Term& t);
  SeqTerm N(const Term& t);

  const NormSignature& norm_signature() const { return ns_; }
  const Trs& trs() const { return trs_; }
  const SafeMapping& safe_mapping() const { return sm_; }

 private:
  const Trs& trs_;
  SafeMapping sm_;
  NormSignature ns_;
  RewriteEngine engine_;
};

// The parameter from the main theorem: max normalised arity and twice the
// largest right-hand-side size, at least 1.
int embedding_parameter(const Trs& trs, const SafeMapping& sm);

}  // namespace popstar

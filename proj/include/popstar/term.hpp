#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace popstar {

using SymbolId = int32_t;

enum class SymbolKind { Defined, Constructor };

struct Symbol {
  std::string name;
  int arity = 0;
  SymbolKind kind = SymbolKind::Constructor;
};

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Function symbols partitioned into defined symbols and constructors.
class Signature {
 public:
  SymbolId add(const std::string& name, int arity, SymbolKind kind);
  // Adds the symbol if unknown, otherwise checks arity/kind consistency.
  SymbolId ensure(const std::string& name, int arity, SymbolKind kind);

  bool contains(const std::string& name) const { return by_name_.count(name) != 0; }
  SymbolId id(const std::string& name) const;
  const Symbol& at(SymbolId f) const { return symbols_.at(static_cast<size_t>(f)); }
  const std::string& name(SymbolId f) const { return at(f).name; }
  int arity(SymbolId f) const { return at(f).arity; }
  bool is_defined(SymbolId f) const { return at(f).kind == SymbolKind::Defined; }
  bool is_constructor(SymbolId f) const { return at(f).kind == SymbolKind::Constructor; }
  void set_kind(SymbolId f, SymbolKind kind) { symbols_[static_cast<size_t>(f)].kind = kind; }

  size_t size() const { return symbols_.size(); }
  std::vector<SymbolId> defined_symbols() const;
  std::vector<SymbolId> constructors() const;

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
};

// First-order terms: variables or applications with fixed arity.
// Immutable, structurally shared; hash/size/depth cached per node.
class Term {
 public:
  static Term var(const std::string& name);
  static Term app(SymbolId f, std::vector<Term> args);
  static Term app(SymbolId f) { return app(f, {}); }

  bool is_var() const { return n_->is_var; }
  const std::string& var_name() const { return n_->var; }
  SymbolId sym() const { return n_->sym; }
  const std::vector<Term>& args() const { return n_->args; }

  int size() const { return n_->size; }
  int depth() const { return n_->depth; }
  size_t hash() const { return n_->hash; }
  bool is_ground() const { return n_->ground; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

 private:
  struct Node {
    bool is_var = false;
    bool ground = true;
    std::string var;
    SymbolId sym = -1;
    std::vector<Term> args;
    size_t hash = 0;
    int size = 1;
    int depth = 1;
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct TermHash {
  size_t operator()(const Term& t) const { return t.hash(); }
};
struct TermPairHash {
  size_t operator()(const std::pair<Term, Term>& p) const {
    return p.first.hash() * 0x9e3779b97f4a7c15ULL + p.second.hash();
  }
};

struct Rule {
  Term lhs;
  Term rhs;
};

struct Trs {
  Signature signature;
  std::vector<Rule> rules;

  // Checks arities against the signature, non-variable left-hand sides and
  // vars(rhs) <= vars(lhs). Throws SignatureError on violation.
  void validate() const;
};

int depth(const Term& t);
int term_size(const Term& t);

enum class TermClass { Value, Basic, General };
TermClass classify(const Term& t, const Signature& sig);
bool is_value(const Term& t, const Signature& sig);
// Defined root applied to values (variables excluded, unlike the Basic class).
bool is_basic(const Term& t, const Signature& sig);

bool is_constructor_trs(const Trs& r);
bool is_left_linear(const Term& lhs);
bool is_orthogonal(const Trs& r);

void collect_vars(const Term& t, std::set<std::string>& out);
std::set<std::string> vars(const Term& t);

using Substitution = std::unordered_map<std::string, Term>;
Term apply_subst(const Term& t, const Substitution& s);
// Syntactic matching of subject against pattern (consistent for repeated vars).
bool match(const Term& pattern, const Term& subject, Substitution& s);
bool unify(const Term& a, const Term& b, Substitution& s);
Term rename_vars(const Term& t, const std::string& prefix);

std::string to_string(const Term& t, const Signature& sig);

// Per defined symbol: safe argument positions (1-based). Constructor
// positions are all safe; that is answered on query, never stored.
class SafeMapping {
 public:
  SafeMapping() = default;
  void set(SymbolId f, std::set<int> safe_positions) { safe_[f] = std::move(safe_positions); }
  bool has(SymbolId f) const { return safe_.count(f) != 0; }
  bool is_safe(const Signature& sig, SymbolId f, int pos) const;
  bool is_normal(const Signature& sig, SymbolId f, int pos) const {
    return !is_safe(sig, f, pos);
  }
  std::set<int> safe_set(const Signature& sig, SymbolId f) const;
  std::vector<int> normal_positions(const Signature& sig, SymbolId f) const;
  std::vector<int> safe_positions(const Signature& sig, SymbolId f) const;

 private:
  std::map<SymbolId, std::set<int>> safe_;
};

// Quasi-precedence as integer ranks on defined symbols. Constructors are
// mutually equivalent and strictly below every defined symbol.
class Precedence {
 public:
  Precedence() = default;
  void set_rank(SymbolId f, int rank) { rank_[f] = rank; }
  bool has(SymbolId f) const { return rank_.count(f) != 0; }
  int rank(SymbolId f) const;

  bool gt(const Signature& sig, SymbolId f, SymbolId g) const;
  bool eq(const Signature& sig, SymbolId f, SymbolId g) const;
  bool geq(const Signature& sig, SymbolId f, SymbolId g) const {
    return gt(sig, f, g) || eq(sig, f, g);
  }
  const std::map<SymbolId, int>& ranks() const { return rank_; }

 private:
  std::map<SymbolId, int> rank_;
};

enum class OrderKind { Pop, PopPs, Mpo };

std::string order_name(OrderKind k);

struct Certificate {
  Precedence precedence;
  SafeMapping safe_mapping;
  OrderKind order_kind = OrderKind::Pop;
};

}  // namespace popstar

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "popstar/term.hpp"

namespace popstar {

enum class CmpResult { Greater, EquivalentSafe, Incomparable };

enum class TraceFlavor { Gsq, Gpop, GpopPs, Mpo };
enum class TraceKind { EqRefl, EqPerm, St, Ia, Ep };

struct Trace;
using TracePtr = std::shared_ptr<const Trace>;

struct CoverEdge {
  int lhs_pos;  // 0-based argument indices
  int rhs_pos;
  bool strict;
};

// Witness of a successful comparison: the clause applied, the argument or
// permutation chosen, and the sub-derivations. Enough to replay the verdict
// without searching.
struct Trace {
  TraceFlavor flavor = TraceFlavor::Gpop;
  TraceKind kind = TraceKind::St;
  Term lhs;
  Term rhs;
  int index = -1;               // st: argument position used (0-based)
  std::vector<int> perm;        // eq-perm: rhs index per lhs argument
  std::vector<CoverEdge> normal_cover;  // ep: multiset cover witnesses
  std::vector<CoverEdge> safe_cover;
  std::vector<TracePtr> children;
  Trace(Term l, Term r) : lhs(std::move(l)), rhs(std::move(r)) {}
};

struct Comparison {
  CmpResult result = CmpResult::Incomparable;
  TracePtr trace;  // set when result is Greater or EquivalentSafe
};

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool term_below(const Term& t, SymbolId f, const Signature& sig, const Precedence& prec);

// Direct decision procedures for the orders under a fixed certificate.
// Pure apart from per-instance memo tables; not thread-safe per instance.
class OrderContext {
 public:
  OrderContext(const Trs& trs, Certificate cert);

  const Trs& trs() const { return trs_; }
  const Certificate& certificate() const { return cert_; }

  bool eqis(const Term& s, const Term& t);
  bool gsq(const Term& s, const Term& t);
  Comparison gpop(const Term& s, const Term& t);
  Comparison gpopps(const Term& s, const Term& t);
  bool mpo(const Term& s, const Term& t);
  // Dispatches on the certificate's order kind.
  Comparison compare(const Term& s, const Term& t);

  TracePtr eqis_trace(const Term& s, const Term& t);
  TracePtr gsq_trace(const Term& s, const Term& t);
  Comparison mpo_compare(const Term& s, const Term& t);

  // Re-derives a verdict from the recorded witnesses only.
  bool replay(const TracePtr& tr);

 private:
  Comparison order_compare(const Term& s, const Term& t, TraceFlavor flavor);
  std::optional<std::vector<CoverEdge>> find_cover(
      const std::vector<Term>& lhs, const std::vector<Term>& rhs, TraceFlavor flavor,
      bool need_strict);
  bool term_eq(const Term& s, const Term& t, TraceFlavor flavor, TracePtr* out);

  const Trs& trs_;
  Certificate cert_;

  using Key = std::pair<Term, Term>;
  template <class V>
  using Memo = std::unordered_map<Key, V, TermPairHash>;
  Memo<TracePtr> eqis_memo_;     // nullptr = not equivalent
  Memo<TracePtr> mpoeq_memo_;
  Memo<TracePtr> gsq_memo_;
  Memo<Comparison> memo_[3];     // Gpop, GpopPs, Mpo
};

bool mpo(const Term& s, const Term& t, const Signature& sig, const Precedence& prec);

struct RuleVerdict {
  size_t rule_index = 0;
  Comparison cmp;
};

struct VerifyReport {
  bool success = false;
  std::vector<RuleVerdict> rules;
  std::string error;  // structural problems (non-constructor TRS, missing entries)
};

VerifyReport verify_certificate(const Trs& trs, const Certificate& cert);

}  // namespace popstar

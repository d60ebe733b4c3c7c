#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "popstar/term.hpp"

namespace popstar {

struct DerivationStats {
  Term start;
  long long height = 0;   // exact when capped is false, otherwise a lower bound
  bool capped = false;
  long long explored = 0;  // distinct states expanded during the search
};

// Max observed innermost derivation height per input size; nondecreasing.
struct RcSample {
  std::vector<int> sizes;
  std::vector<long long> heights;
  bool capped_any = false;
};

struct RcFit {
  double slope = 0.0;          // log-log least-squares exponent
  bool superpolynomial = false;
  bool degenerate = false;
  double r2_loglog = 0.0;
  double r2_semilog = 0.0;
  RcSample sample;
};

class RewriteEngine {
 public:
  explicit RewriteEngine(const Trs& trs) : trs_(trs) {}

  bool is_normal_form(const Term& t);
  std::vector<Term> innermost_successors(const Term& t);
  DerivationStats derivation_height(const Term& t, long long cap = 2'000'000);

  const Trs& trs() const { return trs_; }

 private:
  // Reachable normal forms of t, each with the maximal number of innermost
  // steps needed to reach it. Innermost steps below distinct argument
  // positions commute, so heights decompose as the sum of argument
  // evaluations plus the height of the root term on the chosen normal forms.
  using NfMap = std::unordered_map<Term, long long, TermHash>;
  const NfMap& eval(const Term& t);

  std::vector<Term> root_reducts(const Term& t);
  bool root_matches(const Term& t);

  const Trs& trs_;
  std::unordered_map<Term, bool, TermHash> nf_cache_;
  std::unordered_map<Term, std::shared_ptr<NfMap>, TermHash> eval_cache_;
  long long budget_ = 0;
  long long explored_ = 0;
  struct CapHit {};
  void spend(long long units = 1);
};

bool is_normal_form(const Term& t, const Trs& r);
std::vector<Term> innermost_successors(const Term& t, const Trs& r);
DerivationStats derivation_height(const Term& t, const Trs& r, long long cap = 2'000'000);

RcFit rc_fit(const Trs& r, const std::function<Term(int)>& generator, int n_max,
             long long cap = 2'000'000);

}  // namespace popstar

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "popstar/orders.hpp"
#include "popstar/seqterm.hpp"

namespace popstar {

using BigInt = boost::multiprecision::cpp_int;

// Finite approximations of the polynomial path order on sequences. The
// parameter k bounds widths, l the proof-tree depth; both are per Buchholz.
class SeqCmp {
 public:
  SeqCmp(const NormSignature& ns, int k) : ns_(ns), k_(k) {}

  bool eqi(const SeqTerm& a, const SeqTerm& b);
  // auxiliary order (no case for equivalent head symbols)
  bool gppv(const SeqTerm& a, const SeqTerm& b, int l);
  bool gpopv(const SeqTerm& a, const SeqTerm& b, int l);
  bool gppv(const SeqTerm& a, const SeqTerm& b) { return gppv(a, b, k_); }
  bool gpopv(const SeqTerm& a, const SeqTerm& b) { return gpopv(a, b, k_); }

  int k() const { return k_; }

  // Instrumentation for the length-bound lemma: len(b) <= width(a) + k is
  // recorded for every successful top-level comparison at l = k.
  long long checked = 0;
  long long length_violations = 0;

 private:
  friend struct MsSearch;
  bool cmp(const SeqTerm& a, const SeqTerm& b, int l, bool full);
  bool ms_clause(const SeqTerm& a, const SeqTerm& b, int l, bool full);
  size_t chash(const SeqTerm& t);
  bool eqi_rec(const SeqTerm& a, const SeqTerm& b);

  const NormSignature& ns_;
  int k_;

  struct KeyHash {
    size_t operator()(const std::tuple<SeqTerm, SeqTerm, int, bool>& k) const {
      return std::get<0>(k).hash() * 0x9e3779b97f4a7c15ULL +
             std::get<1>(k).hash() * 31 + static_cast<size_t>(std::get<2>(k)) * 2 +
             (std::get<3>(k) ? 1 : 0);
    }
  };
  struct PairHash {
    size_t operator()(const std::pair<SeqTerm, SeqTerm>& p) const {
      return p.first.hash() * 0x9e3779b97f4a7c15ULL + p.second.hash();
    }
  };
  std::unordered_map<std::tuple<SeqTerm, SeqTerm, int, bool>, bool, KeyHash> memo_;
  std::unordered_map<std::pair<SeqTerm, SeqTerm>, bool, PairHash> eqi_memo_;
  std::unordered_map<SeqTerm, size_t, SeqTermHash> chash_memo_;
};

struct SlowCaps {
  int max_depth = 2;
  int max_width = 4;
  std::vector<int> symbols;  // normalised symbol ids allowed in successors
};

struct SlowResult {
  long long length = 0;       // longest descending chain within the universe
  size_t universe_size = 0;
  bool start_in_universe = true;
};

// Longest gpopv_{k,k}-descending chain from a ground term, over the capped
// universe generated bottom-up from the given symbols. Lower bounds are
// genuine; exactness needs caps that contain all successors.
SlowResult slow_estimate(const SeqTerm& a, int k, const SlowCaps& caps,
                         const NormSignature& ns);

// The exact constants c_{k,p}, d_{k,p} from the polynomial bound, defined by
// recursion on p.
std::pair<BigInt, BigInt> bound_constants(int k, int p);

// Order-preserving homomorphism from small multisets of naturals into the
// naturals: values sorted descending, read positionally in base c.
BigInt homo(std::vector<long long> values, int k, const BigInt& c);

// MSlow over argument sequences: homo of the Slow values with c one above
// their maximum.
BigInt mslow(const std::vector<long long>& slow_values, int k);

struct EmbeddingOutcome {
  bool s_ok = false;
  bool n_ok = false;
  int ell = 0;
};

// Direct evaluation of the predicative embedding for an instantiated rule in
// a context: S(C[l sigma]) and N(C[l sigma]) must dominate the corresponding
// right-hand interpretations at parameters (ell, ell).
EmbeddingOutcome check_embedding(const Trs& trs, const Certificate& cert,
                                 const Rule& rule, const Substitution& sigma,
                                 const std::optional<Term>& context,
                                 const std::string& hole_var = "#hole",
                                 SeqCmp* shared_cmp = nullptr,
                                 PredInterp* shared_interp = nullptr);

}  // namespace popstar

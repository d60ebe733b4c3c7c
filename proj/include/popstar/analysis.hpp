#pragma once

#include <optional>
#include <string>
#include <vector>

#include "popstar/corpus.hpp"
#include "popstar/orders.hpp"
#include "popstar/rewrite.hpp"
#include "popstar/term.hpp"

namespace popstar {

enum class Verdict { Compatible, Incompatible, StructuralReject };

std::string verdict_name(Verdict v);

struct AnalysisOptions {
  OrderKind order = OrderKind::Pop;
  bool verify = true;
  bool memoize = true;
  std::string dimacs_path;  // dump the CNF instance when nonempty
  std::string sat_cmd;      // external solver command; empty = internal
  std::optional<Certificate> given_cert;  // check this instead of synthesizing
};

struct AnalysisReport {
  std::string id;
  OrderKind order = OrderKind::Pop;
  Verdict verdict = Verdict::Incompatible;
  std::string reason;
  std::optional<Certificate> certificate;
  bool verified = false;
  long long encode_ms = 0, solve_ms = 0, verify_ms = 0;
  size_t num_vars = 0, num_clauses = 0;

  std::string summary_line() const;
};

AnalysisReport analyze_trs(const std::string& id, const Trs& trs,
                           const AnalysisOptions& opts);

// Independent problems processed by a bounded worker pool; results come back
// in input order.
std::vector<AnalysisReport> analyze_batch(
    const std::vector<std::pair<std::string, const Trs*>>& problems,
    const AnalysisOptions& opts, int workers = 4);

struct CorpusRunResult {
  std::vector<AnalysisReport> reports;
  std::vector<std::string> mismatches;  // human-readable expectation failures
  bool ok = true;
};

CorpusRunResult run_corpus(const std::vector<CorpusEntry>& entries,
                           const AnalysisOptions& base, int workers = 4);

struct EmpiricalReport {
  std::string id;
  std::string family;
  int n_max = 0;
  RcFit fit;
  std::string summary_line() const;
};

// Families: "rk:<k>", "bin", "mul". Measures innermost derivation heights on
// the designated generator terms and fits the growth exponent.
EmpiricalReport run_empirical(const std::string& id, const std::string& family,
                              int n_max, long long cap);

std::string certificate_block(const Certificate& cert, const Signature& sig);

}  // namespace popstar

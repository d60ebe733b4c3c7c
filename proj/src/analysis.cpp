#include "popstar/analysis.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "popstar/encode.hpp"
#include "popstar/parse.hpp"
#include "popstar/solver.hpp"

namespace popstar {

namespace {
using Clock = std::chrono::steady_clock;
long long ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
      .count();
}
}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Compatible: return "COMPATIBLE";
    case Verdict::Incompatible: return "INCOMPATIBLE";
    case Verdict::StructuralReject: return "REJECT";
  }
  return "?";
}

std::string AnalysisReport::summary_line() const {
  std::ostringstream os;
  os << id << " " << order_name(order) << " " << verdict_name(verdict) << " "
     << encode_ms << " " << solve_ms;
  if (!reason.empty()) os << " # " << reason;
  return os.str();
}

std::string certificate_block(const Certificate& cert, const Signature& sig) {
  std::ostringstream os;
  os << print_certificate(cert, sig);
  return os.str();
}

AnalysisReport analyze_trs(const std::string& id, const Trs& trs,
                           const AnalysisOptions& opts) {
  AnalysisReport rep;
  rep.id = id;
  rep.order = opts.order;

  if (!is_constructor_trs(trs)) {
    rep.verdict = Verdict::StructuralReject;
    rep.reason = "not a constructor TRS";
    return rep;
  }

  if (opts.given_cert) {
    auto t0 = Clock::now();
    VerifyReport vr;
    try {
      vr = verify_certificate(trs, *opts.given_cert);
    } catch (const CertificateError& e) {
      rep.verdict = Verdict::StructuralReject;
      rep.reason = e.what();
      return rep;
    }
    rep.verify_ms = ms_since(t0);
    if (!vr.error.empty()) {
      rep.verdict = Verdict::StructuralReject;
      rep.reason = vr.error;
      return rep;
    }
    if (vr.success) {
      rep.verdict = Verdict::Compatible;
      rep.certificate = *opts.given_cert;
      rep.verified = true;
    } else {
      rep.verdict = Verdict::Incompatible;
      rep.reason = "supplied certificate does not orient all rules";
    }
    return rep;
  }

  Encoder encoder(trs, EncodeOptions{opts.order, opts.memoize});
  auto t0 = Clock::now();
  PropFormula formula = encoder.encode_problem();
  CnfInstance cnf = to_cnf(formula);
  rep.encode_ms = ms_since(t0);
  rep.num_vars = static_cast<size_t>(cnf.num_vars);
  rep.num_clauses = cnf.clauses.size();

  if (!opts.dimacs_path.empty()) {
    std::ofstream os(opts.dimacs_path);
    os << export_dimacs(cnf);
  }

  auto backend = make_backend(opts.sat_cmd);
  auto t1 = Clock::now();
  SolveResult sr = backend->solve(cnf);
  rep.solve_ms = ms_since(t1);
  if (!sr.ok) {
    rep.verdict = Verdict::StructuralReject;
    rep.reason = "solver backend failed: " + sr.error;
    return rep;
  }
  if (!sr.model) {
    rep.verdict = Verdict::Incompatible;
    return rep;
  }

  Certificate cert = encoder.decode(*sr.model, cnf);
  rep.certificate = cert;
  rep.verdict = Verdict::Compatible;
  if (opts.verify) {
    auto t2 = Clock::now();
    VerifyReport vr = verify_certificate(trs, cert);
    rep.verify_ms = ms_since(t2);
    if (!vr.success)
      throw std::logic_error("decoded certificate failed verification on " + id);
    rep.verified = true;
  }
  return rep;
}

std::vector<AnalysisReport> analyze_batch(
    const std::vector<std::pair<std::string, const Trs*>>& problems,
    const AnalysisOptions& opts, int workers) {
  std::vector<AnalysisReport> out(problems.size());
  std::atomic<size_t> next{0};
  int n = std::max(1, std::min<int>(workers, static_cast<int>(problems.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < n; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= problems.size()) return;
        try {
          out[i] = analyze_trs(problems[i].first, *problems[i].second, opts);
        } catch (const std::exception& e) {
          AnalysisReport r;
          r.id = problems[i].first;
          r.order = opts.order;
          r.verdict = Verdict::StructuralReject;
          r.reason = std::string("error: ") + e.what();
          out[i] = std::move(r);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

CorpusRunResult run_corpus(const std::vector<CorpusEntry>& entries,
                           const AnalysisOptions& base, int workers) {
  CorpusRunResult result;
  struct Job {
    const CorpusEntry* entry;
    OrderKind order;
    Expect expect;
  };
  std::vector<Job> jobs;
  for (const CorpusEntry& e : entries)
    for (const auto& [order, expect] : e.expected) jobs.push_back(Job{&e, order, expect});

  std::vector<AnalysisReport> reports(jobs.size());
  std::atomic<size_t> next{0};
  int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < n; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        AnalysisOptions opts = base;
        opts.order = jobs[i].order;
        try {
          reports[i] = analyze_trs(jobs[i].entry->id, jobs[i].entry->trs, opts);
        } catch (const std::exception& e) {
          AnalysisReport r;
          r.id = jobs[i].entry->id;
          r.order = opts.order;
          r.verdict = Verdict::StructuralReject;
          r.reason = std::string("error: ") + e.what();
          reports[i] = std::move(r);
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < jobs.size(); ++i) {
    Verdict want = jobs[i].expect == Expect::Compatible ? Verdict::Compatible
                   : jobs[i].expect == Expect::Incompatible ? Verdict::Incompatible
                                                            : Verdict::StructuralReject;
    if (reports[i].verdict != want) {
      result.ok = false;
      result.mismatches.push_back(jobs[i].entry->id + " under " +
                                  order_name(jobs[i].order) + ": expected " +
                                  verdict_name(want) + ", got " +
                                  verdict_name(reports[i].verdict) +
                                  (reports[i].reason.empty() ? "" : " (" + reports[i].reason + ")"));
    }
    result.reports.push_back(std::move(reports[i]));
  }
  return result;
}

std::string EmpiricalReport::summary_line() const {
  std::ostringstream os;
  os << id << " empirical family=" << family << " n=" << n_max;
  if (fit.degenerate) {
    os << " degenerate";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", fit.slope);
    os << " slope=" << buf << (fit.superpolynomial ? " superpolynomial" : " polynomial");
  }
  if (fit.sample.capped_any) os << " capped";
  return os.str();
}

EmpiricalReport run_empirical(const std::string& id, const std::string& family,
                              int n_max, long long cap) {
  EmpiricalReport rep;
  rep.id = id;
  rep.family = family;
  rep.n_max = n_max;

  Trs trs;
  std::function<Term(int)> gen;
  if (family.rfind("rk:", 0) == 0) {
    int k = std::stoi(family.substr(3));
    trs = gen_rk(k);
    gen = [&trs, k](int n) { return rk_start(trs, k, n); };
  } else if (family == "bin") {
    for (const CorpusEntry& e : bundled_corpus())
      if (e.id == "R_bin") trs = e.trs;
    SymbolId bin = trs.signature.id("bin");
    SymbolId s = trs.signature.id("s");
    SymbolId z = trs.signature.id("0");
    gen = [&trs, bin, s, z](int n) {
      Term tower = Term::app(z);
      for (int i = 0; i < n; ++i) tower = Term::app(s, {tower});
      return Term::app(bin, {tower, tower});
    };
  } else if (family == "mul") {
    for (const CorpusEntry& e : bundled_corpus())
      if (e.id == "R_mul") trs = e.trs;
    SymbolId times = trs.signature.id("times");
    SymbolId s = trs.signature.id("s");
    SymbolId z = trs.signature.id("0");
    gen = [&trs, times, s, z](int n) {
      Term tower = Term::app(z);
      for (int i = 0; i < n; ++i) tower = Term::app(s, {tower});
      return Term::app(times, {tower, tower});
    };
  } else {
    throw std::invalid_argument("unknown family '" + family +
                                "' (use rk:<k>, bin or mul)");
  }

  rep.fit = rc_fit(trs, gen, n_max, cap);
  return rep;
}

}  // namespace popstar

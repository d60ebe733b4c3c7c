#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "popstar/analysis.hpp"
#include "popstar/encode.hpp"
#include "popstar/parse.hpp"
#include "popstar/solver.hpp"

using namespace popstar;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

OrderKind order_of(const std::string& s) {
  if (s == "mpo") return OrderKind::Mpo;
  if (s == "popstar") return OrderKind::Pop;
  if (s == "popstarps") return OrderKind::PopPs;
  throw CLI::ValidationError("--order", "unknown order '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predicative-recursion analysis of constructor rewrite systems "
               "via polynomial path orders"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Decide order compatibility for the given problem files");
  std::vector<std::string> files;
  std::string order_str = "popstar";
  bool verify = true;
  std::string dimacs_path, cert_path, sat_cmd;
  bool verbose = false;
  int workers = 4;
  analyze->add_option("files", files, "problem files (.trs)")->required();
  analyze->add_option("--order", order_str, "mpo|popstar|popstarps");
  analyze->add_flag("--verify,!--no-verify", verify,
                    "re-check the synthesized certificate with the direct order");
  analyze->add_option("--dimacs", dimacs_path, "dump the CNF instance to this path");
  analyze->add_option("--cert", cert_path,
                      "check the given certificate file instead of synthesizing");
  analyze->add_option("--sat-cmd", sat_cmd,
                      "external solver command (also env POPSTAR_SAT_CMD)");
  analyze->add_option("--workers", workers, "parallel problems in batch mode");
  analyze->add_flag("-v,--verbose", verbose, "print certificates");

  // empirical
  auto* empirical = app.add_subcommand(
      "empirical", "Measure innermost derivation heights and fit the exponent");
  std::string family;
  int n_max = 20;
  long long cap = 2'000'000;
  std::string label;
  empirical->add_option("--family", family, "rk:<k>, bin or mul")->required();
  empirical->add_option("--n", n_max, "largest input size");
  empirical->add_option("--cap", cap, "search budget per measurement");
  empirical->add_option("label", label, "report label (defaults to the family)");

  // corpus
  auto* corpus_cmd = app.add_subcommand(
      "corpus", "Run the bundled paper-example corpus against expected verdicts");
  std::string dump_dir;
  bool corpus_verbose = false;
  int corpus_workers = 4;
  corpus_cmd->add_option("--dump", dump_dir, "write the corpus problems to a directory");
  corpus_cmd->add_option("--workers", corpus_workers, "worker pool size");
  corpus_cmd->add_flag("-v,--verbose", corpus_verbose, "print certificates");

  // solve: DIMACS in, model out (usable as its own external backend)
  auto* solve_cmd =
      app.add_subcommand("solve", "Solve a DIMACS CNF file with the internal solver");
  std::string cnf_in, cnf_out;
  solve_cmd->add_option("input", cnf_in, "DIMACS file")->required();
  solve_cmd->add_option("output", cnf_out, "answer file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      AnalysisOptions opts;
      opts.order = order_of(order_str);
      opts.verify = verify;
      opts.dimacs_path = dimacs_path;
      opts.sat_cmd = sat_cmd;

      bool all_definite = true;
      std::vector<ParsedProblem> parsed;
      std::vector<std::pair<std::string, const Trs*>> problems;
      for (const std::string& f : files) parsed.push_back(parse_problem(slurp(f)));
      for (size_t i = 0; i < files.size(); ++i)
        problems.emplace_back(files[i], &parsed[i].trs);

      std::vector<AnalysisReport> reports;
      if (!cert_path.empty()) {
        for (size_t i = 0; i < problems.size(); ++i) {
          AnalysisOptions o = opts;
          o.given_cert = parse_certificate(slurp(cert_path), parsed[i].trs.signature,
                                           opts.order);
          reports.push_back(analyze_trs(problems[i].first, *problems[i].second, o));
        }
      } else {
        reports = analyze_batch(problems, opts, workers);
      }

      for (size_t i = 0; i < reports.size(); ++i) {
        const AnalysisReport& r = reports[i];
        std::cout << r.summary_line() << "\n";
        if (verbose && r.certificate)
          std::cout << certificate_block(*r.certificate, parsed[i].trs.signature);
        if (r.verdict == Verdict::StructuralReject &&
            r.reason.rfind("error:", 0) == 0)
          all_definite = false;
      }
      return all_definite ? 0 : 1;
    }

    if (*empirical) {
      if (label.empty()) label = family;
      EmpiricalReport rep = run_empirical(label, family, n_max, cap);
      std::cout << rep.summary_line() << "\n";
      return 0;
    }

    if (*corpus_cmd) {
      auto entries = bundled_corpus();
      if (!dump_dir.empty()) {
        for (const CorpusEntry& e : entries) {
          std::ofstream os(dump_dir + "/" + e.id + ".trs");
          if (!os) throw std::runtime_error("cannot write into " + dump_dir);
          os << e.source;
        }
        std::cout << "wrote " << entries.size() << " problems to " << dump_dir << "\n";
      }
      AnalysisOptions opts;
      CorpusRunResult result = run_corpus(entries, opts, corpus_workers);
      for (size_t i = 0; i < result.reports.size(); ++i) {
        const AnalysisReport& r = result.reports[i];
        std::cout << r.summary_line() << "\n";
        if (corpus_verbose && r.certificate) {
          for (const CorpusEntry& e : entries)
            if (e.id == r.id) std::cout << certificate_block(*r.certificate, e.trs.signature);
        }
      }
      for (const std::string& m : result.mismatches)
        std::cout << "MISMATCH " << m << "\n";
      std::cout << (result.ok ? "corpus OK" : "corpus FAILED") << "\n";
      return result.ok ? 0 : 1;
    }

    if (*solve_cmd) {
      std::string text = slurp(cnf_in);
      // parse DIMACS
      std::istringstream is(text);
      std::string tok;
      CnfInstance inst;
      std::vector<int> clause;
      while (is >> tok) {
        if (tok == "c") {
          std::string rest;
          std::getline(is, rest);
          continue;
        }
        if (tok == "p") {
          is >> tok >> inst.num_vars;
          int ignored;
          is >> ignored;
          continue;
        }
        int lit = std::stoi(tok);
        if (lit == 0) {
          inst.clauses.push_back(clause);
          clause.clear();
        } else {
          clause.push_back(lit);
        }
      }
      InternalSolver solver;
      SolveResult r = solver.solve(inst, {});
      std::ostringstream out;
      if (r.model) {
        out << "s SATISFIABLE\nv ";
        for (int v = 1; v <= inst.num_vars; ++v)
          out << (r.model->value(v) ? v : -v) << " ";
        out << "0\n";
      } else {
        out << "s UNSATISFIABLE\n";
      }
      if (cnf_out.empty()) {
        std::cout << out.str();
      } else {
        std::ofstream os(cnf_out);
        os << out.str();
      }
      return r.model ? 10 : 20;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

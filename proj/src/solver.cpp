#include "popstar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace popstar {

namespace {

// Minimal CDCL core: two watched literals, first-UIP learning, VSIDS-style
// activities, Luby restarts. Variables are 1..n.
class Cdcl {
 public:
  explicit Cdcl(int num_vars) : n_(num_vars) {
    assigns_.assign(static_cast<size_t>(n_) + 1, 0);
    level_.assign(static_cast<size_t>(n_) + 1, 0);
    reason_.assign(static_cast<size_t>(n_) + 1, -1);
    activity_.assign(static_cast<size_t>(n_) + 1, 0.0);
    phase_.assign(static_cast<size_t>(n_) + 1, false);
    watches_.assign(2 * static_cast<size_t>(n_) + 2, {});
    seen_.assign(static_cast<size_t>(n_) + 1, false);
  }

  bool ok = true;

  void add_clause(std::vector<int> lits) {
    if (!ok) return;
    std::sort(lits.begin(), lits.end(),
              [](int a, int b) { return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && a < b); });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i] == -lits[i + 1]) return;  // tautology
    if (lits.empty()) {
      ok = false;
      return;
    }
    if (lits.size() == 1) {
      int v = value(lits[0]);
      if (v == -1) {
        ok = false;
        return;
      }
      if (v == 0) {
        enqueue(lits[0], -1);
        if (propagate() != -1) ok = false;
      }
      return;
    }
    attach(std::move(lits));
  }

  std::optional<std::vector<bool>> solve(const std::vector<int>& assumptions) {
    if (!ok) return std::nullopt;
    if (propagate() != -1) return std::nullopt;

    long long conflicts = 0, restart_limit = next_restart_limit();
    while (true) {
      int confl = propagate();
      if (confl != -1) {
        if (decision_level() == 0) return std::nullopt;
        ++conflicts;
        std::vector<int> learnt;
        int back_level = analyze(confl, learnt);
        backtrack(back_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int idx = attach(learnt);
          enqueue(learnt[0], idx);
        }
        decay();
        if (conflicts >= restart_limit) {
          conflicts = 0;
          restart_limit = next_restart_limit();
          backtrack(0);
        }
        continue;
      }

      // assumptions become the first decisions; a falsified assumption means
      // unsatisfiable under the given assumptions
      if (decision_level() < static_cast<int>(assumptions.size())) {
        int a = assumptions[static_cast<size_t>(decision_level())];
        int v = value(a);
        if (v == -1) return std::nullopt;
        new_level();
        if (v == 0) enqueue(a, -1);
        continue;
      }

      int lit = pick_branch();
      if (lit == 0) {
        std::vector<bool> model(static_cast<size_t>(n_) + 1, false);
        for (int v = 1; v <= n_; ++v)
          model[static_cast<size_t>(v)] = assigns_[static_cast<size_t>(v)] == 1;
        return model;
      }
      new_level();
      enqueue(lit, -1);
    }
  }

 private:
  static int var(int lit) { return lit > 0 ? lit : -lit; }
  static size_t widx(int lit) {
    return 2 * static_cast<size_t>(var(lit)) + (lit > 0 ? 0 : 1);
  }

  int value(int lit) const {  // 1 true, -1 false, 0 unassigned
    int a = assigns_[static_cast<size_t>(var(lit))];
    if (a == 0) return 0;
    return (a == 1) == (lit > 0) ? 1 : -1;
  }

  int attach(std::vector<int> lits) {
    int idx = static_cast<int>(clauses_.size());
    clauses_.push_back(std::move(lits));
    watches_[widx(-clauses_.back()[0])].push_back(idx);
    watches_[widx(-clauses_.back()[1])].push_back(idx);
    return idx;
  }

  void enqueue(int lit, int reason) {
    assigns_[static_cast<size_t>(var(lit))] = lit > 0 ? 1 : -1;
    level_[static_cast<size_t>(var(lit))] = decision_level();
    reason_[static_cast<size_t>(var(lit))] = reason;
    trail_.push_back(lit);
  }

  int decision_level() const { return static_cast<int>(level_marks_.size()); }
  void new_level() { level_marks_.push_back(trail_.size()); }

  void backtrack(int lvl) {
    if (decision_level() <= lvl) return;
    size_t keep = level_marks_[static_cast<size_t>(lvl)];
    for (size_t i = trail_.size(); i > keep; --i) {
      int v = var(trail_[i - 1]);
      phase_[static_cast<size_t>(v)] = assigns_[static_cast<size_t>(v)] == 1;
      assigns_[static_cast<size_t>(v)] = 0;
      reason_[static_cast<size_t>(v)] = -1;
    }
    trail_.resize(keep);
    qhead_ = keep;
    level_marks_.resize(static_cast<size_t>(lvl));
  }

  int propagate() {  // returns a conflicting clause index or -1
    while (qhead_ < trail_.size()) {
      int lit = trail_[qhead_++];
      auto& wl = watches_[widx(lit)];
      size_t keep = 0;
      for (size_t i = 0; i < wl.size(); ++i) {
        int ci = wl[i];
        auto& cl = clauses_[static_cast<size_t>(ci)];
        int falsified = -lit;
        if (cl[0] == falsified) std::swap(cl[0], cl[1]);
        if (value(cl[0]) == 1) {
          wl[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < cl.size(); ++k) {
          if (value(cl[k]) != -1) {
            std::swap(cl[1], cl[k]);
            watches_[widx(-cl[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        wl[keep++] = ci;
        if (value(cl[0]) == -1) {
          for (size_t k = i + 1; k < wl.size(); ++k) wl[keep++] = wl[k];
          wl.resize(keep);
          return ci;
        }
        enqueue(cl[0], ci);
      }
      wl.resize(keep);
    }
    return -1;
  }

  void bump(int v) {
    activity_[static_cast<size_t>(v)] += increment_;
    if (activity_[static_cast<size_t>(v)] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      increment_ *= 1e-100;
    }
  }
  void decay() { increment_ /= 0.95; }

  int analyze(int confl, std::vector<int>& learnt) {
    learnt.push_back(0);  // slot for the asserting literal
    int path = 0;
    int p = 0;  // 0 = undefined
    size_t index = trail_.size();
    do {
      auto& cl = clauses_[static_cast<size_t>(confl)];
      for (size_t k = (p == 0 ? 0 : 1); k < cl.size(); ++k) {
        int q = cl[k];
        int v = var(q);
        if (seen_[static_cast<size_t>(v)] || level_[static_cast<size_t>(v)] == 0)
          continue;
        seen_[static_cast<size_t>(v)] = true;
        bump(v);
        if (level_[static_cast<size_t>(v)] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen_[static_cast<size_t>(var(trail_[index - 1]))]) --index;
      p = trail_[--index];
      confl = reason_[static_cast<size_t>(var(p))];
      seen_[static_cast<size_t>(var(p))] = false;
      --path;
    } while (path > 0);
    learnt[0] = -p;

    int back = 0;
    size_t best = 1;
    for (size_t k = 1; k < learnt.size(); ++k) {
      int lv = level_[static_cast<size_t>(var(learnt[k]))];
      if (lv > back) {
        back = lv;
        best = k;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[best]);
    for (int q : learnt) seen_[static_cast<size_t>(var(q))] = false;
    return learnt.size() == 1 ? 0 : back;
  }

  int pick_branch() {
    int best = 0;
    double best_act = -1.0;
    for (int v = 1; v <= n_; ++v)
      if (assigns_[static_cast<size_t>(v)] == 0 &&
          activity_[static_cast<size_t>(v)] > best_act) {
        best_act = activity_[static_cast<size_t>(v)];
        best = v;
      }
    if (best == 0) return 0;
    return phase_[static_cast<size_t>(best)] ? best : -best;
  }

  long long next_restart_limit() {
    ++restarts_;
    long long i = restarts_;
    // Luby sequence
    long long k = 1;
    while ((1LL << (k + 1)) <= i + 1) ++k;
    while ((1LL << k) - 1 != i + 1) {
      i = i - ((1LL << (k - 1)) - 1) - 1;
      k = 1;
      while ((1LL << (k + 1)) <= i + 1) ++k;
    }
    return 64 * (1LL << (k - 1));
  }

  int n_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<bool> phase_;
  std::vector<bool> seen_;
  std::vector<int> trail_;
  std::vector<size_t> level_marks_;
  size_t qhead_ = 0;
  double increment_ = 1.0;
  long long restarts_ = 0;
};

}  // namespace

SolveResult InternalSolver::solve(const CnfInstance& instance,
                                  const std::vector<int>& assumptions) {
  SolveResult r;
  r.ok = true;
  if (instance.trivially_false) return r;
  Cdcl solver(instance.num_vars);
  for (const auto& cl : instance.clauses) {
    solver.add_clause(cl);
    if (!solver.ok) return r;
  }
  auto model = solver.solve(assumptions);
  if (model) {
    Model m;
    m.values = std::move(*model);
    r.model = std::move(m);
  }
  return r;
}

SolveResult ExternalDimacsSolver::solve(const CnfInstance& instance,
                                        const std::vector<int>& assumptions) {
  SolveResult r;
  CnfInstance work = instance;
  for (int a : assumptions) work.clauses.push_back({a});

  char dir_template[] = "/tmp/popstar.XXXXXX";
  char* dir = mkdtemp(dir_template);
  if (!dir) {
    r.error = "cannot create temporary directory";
    return r;
  }
  std::string in_path = std::string(dir) + "/in.cnf";
  std::string out_path = std::string(dir) + "/out.txt";
  std::string log_path = std::string(dir) + "/stdout.txt";
  {
    std::ofstream os(in_path);
    os << export_dimacs(work);
  }
  std::string cmd =
      command_ + " " + in_path + " " + out_path + " > " + log_path + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  (void)rc;  // minisat exits 10/20; the answer text decides

  auto slurp = [](const std::string& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  std::string text = slurp(out_path);
  if (text.empty()) text = slurp(log_path);
  std::string cleanup = "rm -rf " + std::string(dir);
  int rc2 = std::system(cleanup.c_str());
  (void)rc2;

  if (text.empty()) {
    r.error = "solver produced no output";
    return r;
  }
  r.ok = true;
  r.model = parse_solver_output(text, work.num_vars);
  return r;
}

std::unique_ptr<SatBackend> make_backend(const std::string& cmd) {
  std::string c = cmd;
  if (c.empty()) {
    const char* env = std::getenv("POPSTAR_SAT_CMD");
    if (env) c = env;
  }
  if (!c.empty()) return std::make_unique<ExternalDimacsSolver>(c);
  return std::make_unique<InternalSolver>();
}

}  // namespace popstar

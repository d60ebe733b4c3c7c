#include "popstar/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace popstar {

bool RewriteEngine::root_matches(const Term& t) {
  if (t.is_var()) return false;
  for (const Rule& r : trs_.rules) {
    Substitution s;
    if (match(r.lhs, t, s)) return true;
  }
  return false;
}

std::vector<Term> RewriteEngine::root_reducts(const Term& t) {
  std::vector<Term> out;
  if (t.is_var()) return out;
  for (const Rule& r : trs_.rules) {
    Substitution s;
    if (match(r.lhs, t, s)) out.push_back(apply_subst(r.rhs, s));
  }
  return out;
}

bool RewriteEngine::is_normal_form(const Term& t) {
  if (t.is_var()) return true;
  auto it = nf_cache_.find(t);
  if (it != nf_cache_.end()) return it->second;
  bool nf = !root_matches(t);
  if (nf)
    for (const Term& a : t.args())
      if (!is_normal_form(a)) {
        nf = false;
        break;
      }
  nf_cache_.emplace(t, nf);
  return nf;
}

std::vector<Term> RewriteEngine::innermost_successors(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  if (t.is_var()) return out;

  bool args_normal = true;
  for (const Term& a : t.args())
    if (!is_normal_form(a)) args_normal = false;

  if (args_normal) {
    for (Term& u : root_reducts(t))
      if (seen.insert(u).second) out.push_back(u);
  }
  for (size_t i = 0; i < t.args().size(); ++i) {
    for (const Term& ui : innermost_successors(t.args()[i])) {
      std::vector<Term> args = t.args();
      args[i] = ui;
      Term u = Term::app(t.sym(), std::move(args));
      if (seen.insert(u).second) out.push_back(u);
    }
  }
  return out;
}

void RewriteEngine::spend(long long units) {
  explored_ += units;
  budget_ -= units;
  if (budget_ < 0) throw CapHit{};
}

const RewriteEngine::NfMap& RewriteEngine::eval(const Term& t) {
  auto it = eval_cache_.find(t);
  if (it != eval_cache_.end()) return *it->second;

  spend();
  auto result = std::make_shared<NfMap>();

  bool args_normal = true;
  for (const Term& a : t.args())
    if (!is_normal_form(a)) args_normal = false;

  if (args_normal) {
    std::vector<Term> reducts = t.is_var() ? std::vector<Term>{} : root_reducts(t);
    if (reducts.empty()) {
      result->emplace(t, 0);
    } else {
      for (const Term& u : reducts) {
        const NfMap& mu = eval(u);
        for (const auto& [nf, steps] : mu) {
          auto [pos, inserted] = result->try_emplace(nf, steps + 1);
          if (!inserted) pos->second = std::max(pos->second, steps + 1);
        }
      }
    }
  } else {
    // Normalise the arguments in every possible way, then continue from the
    // root term over the chosen normal forms.
    const auto& args = t.args();
    std::vector<const NfMap*> maps(args.size());
    for (size_t i = 0; i < args.size(); ++i) maps[i] = &eval(args[i]);

    std::vector<Term> chosen;
    chosen.reserve(args.size());
    std::function<void(size_t, long long)> combine = [&](size_t i, long long cost) {
      if (i == args.size()) {
        spend();
        Term u = Term::app(t.sym(), chosen);
        const NfMap& mu = eval(u);
        for (const auto& [nf, steps] : mu) {
          auto [pos, inserted] = result->try_emplace(nf, cost + steps);
          if (!inserted) pos->second = std::max(pos->second, cost + steps);
        }
        return;
      }
      for (const auto& [nf, steps] : *maps[i]) {
        chosen.push_back(nf);
        combine(i + 1, cost + steps);
        chosen.pop_back();
      }
    };
    combine(0, 0);
  }

  auto [pos, _] = eval_cache_.emplace(t, std::move(result));
  return *pos->second;
}

DerivationStats RewriteEngine::derivation_height(const Term& t, long long cap) {
  DerivationStats stats{t, 0, false, 0};
  budget_ = cap;
  explored_ = 0;
  eval_cache_.clear();
  try {
    const NfMap& m = eval(t);
    for (const auto& [nf, steps] : m) stats.height = std::max(stats.height, steps);
  } catch (const CapHit&) {
    stats.capped = true;
    // Budget exhausted: fall back to a single bounded walk for a lower bound.
    Term cur = t;
    long long steps = 0;
    long long walk_limit = std::min<long long>(cap, 10000);
    while (steps < walk_limit) {
      std::vector<Term> succ = innermost_successors(cur);
      if (succ.empty()) break;
      cur = succ.front();
      ++steps;
    }
    stats.height = steps;
  }
  stats.explored = explored_;
  return stats;
}

bool is_normal_form(const Term& t, const Trs& r) {
  RewriteEngine e(r);
  return e.is_normal_form(t);
}

std::vector<Term> innermost_successors(const Term& t, const Trs& r) {
  RewriteEngine e(r);
  return e.innermost_successors(t);
}

DerivationStats derivation_height(const Term& t, const Trs& r, long long cap) {
  RewriteEngine e(r);
  return e.derivation_height(t, cap);
}

namespace {
struct LinFit {
  double slope = 0.0, r2 = 0.0;
};

LinFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  LinFit f;
  size_t n = xs.size();
  if (n < 2) return f;
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0) return f;
  f.slope = sxy / sxx;
  f.r2 = syy <= 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}
}  // namespace

RcFit rc_fit(const Trs& r, const std::function<Term(int)>& generator, int n_max,
             long long cap) {
  RcFit fit;
  RewriteEngine engine(r);
  long long running_max = 0;
  for (int n = 1; n <= n_max; ++n) {
    Term start = generator(n);
    DerivationStats st = engine.derivation_height(start, cap);
    fit.sample.capped_any = fit.sample.capped_any || st.capped;
    running_max = std::max(running_max, st.height);
    // runtime complexity is indexed by the size of the basic term
    fit.sample.sizes.push_back(start.size());
    fit.sample.heights.push_back(running_max);
  }

  // Fit on the largest half of the sampled range.
  std::vector<double> lx, ly, nx;
  for (size_t i = 0; i < fit.sample.sizes.size(); ++i) {
    int size = fit.sample.sizes[i];
    long long h = fit.sample.heights[i];
    if (static_cast<int>(i) + 1 < std::max(2, n_max / 2) || h < 1) continue;
    lx.push_back(std::log(static_cast<double>(size)));
    ly.push_back(std::log(static_cast<double>(h)));
    nx.push_back(static_cast<double>(size));
  }
  bool all_equal = true;
  for (size_t i = 1; i < ly.size(); ++i)
    if (ly[i] != ly[0]) all_equal = false;
  if (ly.size() < 2 || all_equal) {
    fit.degenerate = true;
    return fit;
  }

  LinFit loglog = least_squares(lx, ly);
  LinFit semilog = least_squares(nx, ly);
  fit.slope = loglog.slope;
  fit.r2_loglog = loglog.r2;
  fit.r2_semilog = semilog.r2;
  // Exponential families make log(height) linear in n itself; polynomial
  // ones make it linear in log(n).
  fit.superpolynomial = semilog.r2 > loglog.r2 && semilog.slope > 0.15;
  return fit;
}

}  // namespace popstar

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "popstar/corpus.hpp"
#include "popstar/term.hpp"

namespace popstar::test {

inline const CorpusEntry& corpus_entry(const std::string& id) {
  static std::vector<CorpusEntry> entries = bundled_corpus();
  for (const CorpusEntry& e : entries)
    if (e.id == id) return e;
  throw std::runtime_error("no corpus entry " + id);
}

// Brute-force oracle for the multiset extension via the X/Y-difference
// definition, on equivalence classes. Elements are ints; class and strict
// relations supplied as callbacks (strict must be class-compatible).
struct MulOracle {
  std::function<int(int)> cls;
  std::function<bool(int, int)> strict_cls;  // on class representatives

  std::vector<int> classes(const std::vector<int>& m) const {
    std::vector<int> out;
    for (int x : m) out.push_back(cls(x));
    std::sort(out.begin(), out.end());
    return out;
  }

  static bool sub_multiset(std::vector<int> a, std::vector<int> b) {
    for (int x : a) {
      auto it = std::find(b.begin(), b.end(), x);
      if (it == b.end()) return false;
      b.erase(it);
    }
    return true;
  }

  static std::vector<int> diff(std::vector<int> a, const std::vector<int>& b) {
    for (int x : b) {
      auto it = std::find(a.begin(), a.end(), x);
      if (it != a.end()) a.erase(it);
    }
    return a;
  }

  bool strict(const std::vector<int>& m1, const std::vector<int>& m2) const {
    std::vector<int> c1 = classes(m1), c2 = classes(m2);
    size_t n = c1.size();
    // enumerate sub-multisets X of c1 by bitmask over positions
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> x, rest;
      for (size_t i = 0; i < n; ++i)
        ((mask >> i) & 1 ? x : rest).push_back(c1[i]);
      if (!sub_multiset(rest, c2)) continue;
      std::vector<int> y = diff(c2, rest);
      bool ok = true;
      for (int ye : y) {
        bool covered = false;
        for (int xe : x)
          if (strict_cls(xe, ye)) covered = true;
        if (!covered) ok = false;
      }
      if (ok) return true;
    }
    return false;
  }

  bool weak(const std::vector<int>& m1, const std::vector<int>& m2) const {
    return strict(m1, m2) || classes(m1) == classes(m2);
  }
};

// Deterministic random term generator over a signature.
struct TermGen {
  const Signature& sig;
  std::mt19937 rng;
  std::vector<SymbolId> ctors, defs;
  std::vector<std::string> var_names{"x", "y", "z"};

  TermGen(const Signature& s, unsigned seed) : sig(s), rng(seed) {
    for (size_t i = 0; i < sig.size(); ++i) {
      SymbolId f = static_cast<SymbolId>(i);
      (sig.is_constructor(f) ? ctors : defs).push_back(f);
    }
  }

  int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

  Term value(int depth, bool ground = false) {
    if (depth <= 1) {
      std::vector<SymbolId> leaves;
      for (SymbolId c : ctors)
        if (sig.arity(c) == 0) leaves.push_back(c);
      if (!ground && pick(3) == 0) return Term::var(var_names[static_cast<size_t>(pick(3))]);
      if (leaves.empty()) return Term::var("x");
      return Term::app(leaves[static_cast<size_t>(pick(static_cast<int>(leaves.size())))]);
    }
    SymbolId c = ctors[static_cast<size_t>(pick(static_cast<int>(ctors.size())))];
    std::vector<Term> args;
    for (int i = 0; i < sig.arity(c); ++i) args.push_back(value(depth - 1, ground));
    return Term::app(c, std::move(args));
  }

  Term term(int depth, bool ground = false) {
    if (depth <= 1 || pick(3) == 0) return value(depth, ground);
    bool use_def = !defs.empty() && pick(2) == 0;
    SymbolId f = use_def ? defs[static_cast<size_t>(pick(static_cast<int>(defs.size())))]
                         : ctors[static_cast<size_t>(pick(static_cast<int>(ctors.size())))];
    std::vector<Term> args;
    for (int i = 0; i < sig.arity(f); ++i) args.push_back(term(depth - 1, ground));
    return Term::app(f, std::move(args));
  }

  // defined root applied to values
  Term basic(int depth) {
    SymbolId f = defs[static_cast<size_t>(pick(static_cast<int>(defs.size())))];
    std::vector<Term> args;
    for (int i = 0; i < sig.arity(f); ++i) args.push_back(value(depth - 1));
    return Term::app(f, std::move(args));
  }
};

}  // namespace popstar::test

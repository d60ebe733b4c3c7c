#include <doctest.h>

#include <random>

#include "popstar/cnf.hpp"
#include "popstar/prop.hpp"
#include "popstar/solver.hpp"

using namespace popstar;
using F = PropFormula;

namespace {

// random formulas over atom ids 0..num_atoms-1
F random_formula(std::mt19937& rng, int num_atoms, int depth) {
  int c = static_cast<int>(rng() % 8);
  if (depth <= 0 || c == 0)
    return F::atom(static_cast<AtomId>(rng() % static_cast<unsigned>(num_atoms)));
  if (c == 1) return F::negf(random_formula(rng, num_atoms, depth - 1));
  if (c == 2) return F::implies(random_formula(rng, num_atoms, depth - 1),
                                random_formula(rng, num_atoms, depth - 1));
  if (c == 3) return F::iff(random_formula(rng, num_atoms, depth - 1),
                            random_formula(rng, num_atoms, depth - 1));
  std::vector<F> kids;
  int n = 2 + static_cast<int>(rng() % 3);
  for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, num_atoms, depth - 1));
  return c % 2 ? F::conj(std::move(kids)) : F::disj(std::move(kids));
}

// truth-table satisfiability over num_atoms atoms
bool tt_satisfiable(const F& f, int num_atoms) {
  for (unsigned m = 0; m < (1u << num_atoms); ++m) {
    std::vector<bool> assignment(static_cast<size_t>(num_atoms));
    for (int i = 0; i < num_atoms; ++i) assignment[static_cast<size_t>(i)] = (m >> i) & 1;
    if (f.eval(assignment)) return true;
  }
  return false;
}

bool cnf_satisfiable(const F& f) {
  CnfInstance cnf = to_cnf(f);
  InternalSolver solver;
  SolveResult r = solver.solve(cnf, {});
  REQUIRE(r.ok);
  return r.model.has_value();
}

}  // namespace

TEST_CASE("formula simplification") {
  F x = F::atom(0), y = F::atom(1);
  CHECK(F::conj({F::ftrue(), x}).same_node(x));
  CHECK(F::conj({F::ffalse(), x}).is_false());
  CHECK(F::disj({F::ffalse(), x}).same_node(x));
  CHECK(F::disj({F::ftrue(), x}).is_true());
  CHECK(F::conj({}).is_true());
  CHECK(F::disj({}).is_false());
  CHECK(F::negf(F::negf(x)).same_node(x));
  CHECK(F::implies(F::ftrue(), y).same_node(y));
  CHECK(F::implies(x, F::ffalse()).op() == F::Op::Not);
  CHECK(F::implies(x, x).is_true());
  CHECK(F::iff(x, x).is_true());
  // idempotence
  CHECK(F::conj({x, x, y}).kids().size() == 2);
}

TEST_CASE("cardinality encodings") {
  AtomRegistry reg;
  // exactly_one([]) is false, exactly_one([x]) is x
  CHECK(exactly_one({}, reg).is_false());
  F x = F::atom(reg.fresh("x")), y = F::atom(reg.fresh("y"));
  CHECK(exactly_one({x}, reg).same_node(x));
  // zero_or_one([x,y]) is the pairwise exclusion
  F zoo = zero_or_one({x, y}, reg);
  CHECK(zoo.op() == F::Op::Or);

  // semantic check across the pairwise/sequential threshold: the encoding
  // under fixed input atoms is satisfiable iff the count is right
  for (int n : {2, 3, 6, 8, 9}) {
    AtomRegistry r2;
    std::vector<F> xs;
    std::vector<AtomId> ids;
    for (int i = 0; i < n; ++i) {
      ids.push_back(r2.fresh("x" + std::to_string(i)));
      xs.push_back(F::atom(ids.back()));
    }
    F eone = exactly_one(xs, r2);
    F zone = zero_or_one(xs, r2);
    for (unsigned m = 0; m < (1u << n); ++m) {
      int count = __builtin_popcount(m);
      for (bool exact : {true, false}) {
        CnfInstance cnf = to_cnf(exact ? eone : zone);
        std::vector<int> assumptions;
        for (int i = 0; i < n; ++i) {
          int var = cnf.var_of(ids[static_cast<size_t>(i)]);
          if (var == 0) continue;  // atom absorbed by simplification
          assumptions.push_back(((m >> i) & 1) ? var : -var);
        }
        InternalSolver solver;
        bool sat = solver.solve(cnf, assumptions).model.has_value();
        bool want = exact ? count == 1 : count <= 1;
        CHECK_MESSAGE(sat == want, "n=", n, " m=", m, " exact=", exact);
      }
    }
  }
}

TEST_CASE("plaisted-greenbaum is equisatisfiable with truth tables") {
  std::mt19937 rng(4242);
  for (int round = 0; round < 200; ++round) {
    int atoms = 2 + static_cast<int>(rng() % 9);
    F f = random_formula(rng, atoms, 4);
    CHECK(cnf_satisfiable(f) == tt_satisfiable(f, atoms));
    // and the negation, to exercise both polarities
    F g = F::negf(f);
    CHECK(cnf_satisfiable(g) == tt_satisfiable(g, atoms));
  }
}

TEST_CASE("cnf corner cases") {
  CHECK(cnf_satisfiable(F::ftrue()));
  CHECK_FALSE(cnf_satisfiable(F::ffalse()));
  F x = F::atom(0);
  CnfInstance cnf = to_cnf(x);
  CHECK(cnf.clauses.size() == 1);  // a single unit clause
  CHECK(cnf.clauses[0].size() == 1);
}

TEST_CASE("linear size of the translation") {
  // a chain of shared conjunctions must not blow up
  std::vector<F> parts;
  F acc = F::atom(0);
  for (int i = 1; i < 40; ++i) {
    acc = F::conj({acc, F::atom(i)});
    parts.push_back(acc);
  }
  F whole = F::conj(parts);
  CnfInstance cnf = to_cnf(whole);
  CHECK(cnf.clauses.size() < 2000);
}

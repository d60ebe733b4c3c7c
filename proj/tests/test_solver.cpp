#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include "popstar/cnf.hpp"
#include "popstar/solver.hpp"

using namespace popstar;

namespace {

CnfInstance make_instance(int vars, std::vector<std::vector<int>> clauses) {
  CnfInstance c;
  c.num_vars = vars;
  c.clauses = std::move(clauses);
  return c;
}

bool brute_force_sat(const CnfInstance& c) {
  for (unsigned m = 0; m < (1u << c.num_vars); ++m) {
    bool ok = true;
    for (const auto& cl : c.clauses) {
      bool any = false;
      for (int lit : cl) {
        int v = lit > 0 ? lit : -lit;
        bool val = (m >> (v - 1)) & 1;
        if ((lit > 0) == val) any = true;
      }
      if (!any) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("basic solving") {
  InternalSolver s;
  CHECK(s.solve(make_instance(1, {{1}}), {}).model.has_value());
  CHECK_FALSE(s.solve(make_instance(1, {{1}, {-1}}), {}).model.has_value());
  CHECK_FALSE(s.solve(make_instance(1, {{}}), {}).model.has_value());

  // model satisfies every clause
  CnfInstance inst = make_instance(4, {{1, 2}, {-1, 3}, {-2, -3}, {3, 4}, {-4, 1}});
  SolveResult r = s.solve(inst, {});
  REQUIRE(r.model.has_value());
  for (const auto& cl : inst.clauses) {
    bool any = false;
    for (int lit : cl)
      if (r.model->value(std::abs(lit)) == (lit > 0)) any = true;
    CHECK(any);
  }
}

TEST_CASE("pigeonhole is unsatisfiable") {
  // 5 pigeons, 4 holes
  const int p = 5, h = 4;
  auto var = [&](int i, int j) { return i * h + j + 1; };
  CnfInstance inst;
  inst.num_vars = p * h;
  for (int i = 0; i < p; ++i) {
    std::vector<int> c;
    for (int j = 0; j < h; ++j) c.push_back(var(i, j));
    inst.clauses.push_back(c);
  }
  for (int j = 0; j < h; ++j)
    for (int i1 = 0; i1 < p; ++i1)
      for (int i2 = i1 + 1; i2 < p; ++i2)
        inst.clauses.push_back({-var(i1, j), -var(i2, j)});
  InternalSolver s;
  CHECK_FALSE(s.solve(inst, {}).model.has_value());
}

TEST_CASE("random instances against brute force") {
  std::mt19937 rng(99);
  InternalSolver s;
  for (int round = 0; round < 300; ++round) {
    int vars = 3 + static_cast<int>(rng() % 10);
    int clauses = 2 + static_cast<int>(rng() % (3 * vars));
    CnfInstance inst;
    inst.num_vars = vars;
    for (int i = 0; i < clauses; ++i) {
      std::vector<int> cl;
      int len = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < len; ++j) {
        int v = 1 + static_cast<int>(rng() % static_cast<unsigned>(vars));
        cl.push_back(rng() % 2 ? v : -v);
      }
      inst.clauses.push_back(cl);
    }
    CHECK(s.solve(inst, {}).model.has_value() == brute_force_sat(inst));
  }
}

TEST_CASE("assumptions") {
  InternalSolver s;
  CnfInstance inst = make_instance(3, {{1, 2}, {-1, 3}});
  CHECK(s.solve(inst, {1}).model.has_value());
  CHECK(s.solve(inst, {-1}).model.has_value());
  CHECK_FALSE(s.solve(inst, {1, -3}).model.has_value());
  // unrelated level-zero conflicts must not leak into assumption handling
  CnfInstance inst2 = make_instance(3, {{1}, {2, 3}});
  auto r = s.solve(inst2, {2});
  REQUIRE(r.model.has_value());
  CHECK(r.model->value(1));
  CHECK(r.model->value(2));
}

TEST_CASE("dimacs export") {
  CnfInstance inst = make_instance(3, {{1, -2}, {2, 3}});
  std::string text = export_dimacs(inst);
  CHECK(text.rfind("p cnf 3 2", 0) == 0);
  CHECK(text.find("1 -2 0") != std::string::npos);
}

TEST_CASE("solver output parsing") {
  auto m1 = parse_solver_output("SAT\n1 -2 3 0\n", 3);
  REQUIRE(m1.has_value());
  CHECK(m1->value(1));
  CHECK_FALSE(m1->value(2));
  CHECK(m1->value(3));

  auto m2 = parse_solver_output("s SATISFIABLE\nv 1 -2 0\nv 3 0\n", 3);
  REQUIRE(m2.has_value());
  CHECK(m2->value(3));

  CHECK_FALSE(parse_solver_output("UNSAT\n", 3).has_value());
  CHECK_FALSE(parse_solver_output("s UNSATISFIABLE\n", 3).has_value());
}

TEST_CASE("external backend round trip through a script") {
  // the stub script answers through the output file like minisat does
  std::string dir = "/tmp/popstar_test_backend";
  std::string script = dir + "/fake_solver.sh";
  std::system(("mkdir -p " + dir).c_str());
  {
    std::ofstream os(script);
    os << "#!/bin/sh\n"
       << "# fixed answer regardless of the instance\n"
       << "echo 'SAT' > \"$2\"\n"
       << "echo '1 -2 0' >> \"$2\"\n";
  }
  std::system(("chmod +x " + script).c_str());

  ExternalDimacsSolver ext(script);
  CnfInstance inst = make_instance(2, {{1}});
  SolveResult r = ext.solve(inst, {});
  REQUIRE(r.ok);
  REQUIRE(r.model.has_value());
  CHECK(r.model->value(1));
  CHECK_FALSE(r.model->value(2));

  // backend selection via environment variable
  setenv("POPSTAR_SAT_CMD", script.c_str(), 1);
  auto backend = make_backend();
  CHECK(backend->name().rfind("external:", 0) == 0);
  unsetenv("POPSTAR_SAT_CMD");
  auto internal = make_backend();
  CHECK(internal->name() == "internal");
}

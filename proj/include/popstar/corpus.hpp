#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "popstar/term.hpp"

namespace popstar {

enum class Expect { Compatible, Incompatible, Reject };

struct CorpusEntry {
  std::string id;
  std::string source;  // problem text, parseable by parse_problem
  Trs trs;
  std::map<OrderKind, Expect> expected;
  // The certificate stated in the literature for this system, when one is
  // given; used for completeness checks against the encoding.
  std::optional<Certificate> paper_cert;
};

// Every named system: multiplication, the satisfiability encoding, tree
// duplication, the double/quadruple system, the exponential bin system, tail
// recursive reversal, the non-constructor system, the two negative variants
// of multiplication, the lower-bound family for k <= 3 and three fragments
// of the B schema.
std::vector<CorpusEntry> bundled_corpus();

// The k-rule family with a single defined symbol over s/0 whose runtime is
// Omega(n^k).
Trs gen_rk(int k);
Term rk_start(const Trs& rk, int k, int n);

// Composition trees over the B schema: initial functions, safe composition
// and safe recursion on notation.
struct BSpec {
  enum class Kind { P, C, I, O, SC, SRN };
  Kind kind = Kind::P;
  int k = 0, l = 0;  // argument layout for I and O
  int j = 0;         // projection index
  std::vector<BSpec> subs;  // SC: h, r_1..r_m, s_1..s_n ; SRN: g, h1, h2
  int sc_num_r = 0;         // SC: how many subs after h are r's

  static BSpec proj(int k, int l, int j);
  static BSpec pred();
  static BSpec cond();
  static BSpec zero(int k, int l);
  static BSpec sc(BSpec h, std::vector<BSpec> rs, std::vector<BSpec> ss);
  static BSpec srn(BSpec g, BSpec h1, BSpec h2);
};

// Instantiates the rule schema for every function symbol in the tree and
// returns the system together with its certificate (precedence by the
// recursion-depth measure, safe mapping as in the schema).
std::pair<Trs, Certificate> gen_b_fragment(const BSpec& spec);

}  // namespace popstar

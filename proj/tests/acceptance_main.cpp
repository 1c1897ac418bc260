// End-to-end acceptance harness.  Eight scenarios with pinned expectations,
// one PASS/FAIL line each on stdout; details of any failure go to stderr.
// argv[1] is the directory holding the bundled config files.
//
// Every expected number in here was computed independently (by hand or by
// the brute-force enumerations mirrored in tests/oracles.hpp) before the
// library produced it.  Time and memory ceilings are pinned as constants.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "entropylab/entropylab.hpp"

using namespace entropylab;

namespace {

constexpr double kMaxSecondsFlagship = 10.0;
constexpr double kMaxSecondsBernoulli = 5.0;
constexpr double kMaxSecondsLemmas = 30.0;
constexpr long kMaxRssKb = 500 * 1024;  // criterion 1 memory ceiling
constexpr double kGrowthFloor = 1.5;

// lamplighter ball sizes |T_n({1, a@0, t, t^-1})|, n = 1..16, enumerated by
// an independent breadth-first walk over (lamp set, cursor) states
const std::vector<std::uint64_t> kLampBall = {
    4,    10,   22,   44,   84,    155,   278,   490,
    850,  1457, 2474, 4167, 6974,  11609, 19238, 31762};

struct Criterion {
  std::string name;
  bool ok = true;
  double seconds = 0.0;
  std::vector<std::string> problems;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      problems.push_back(what);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Config load_config(const std::string& dir, const std::string& name) {
  std::string path = dir + "/" + name;
  std::ifstream in(path);
  if (!in) throw Error("cannot open bundled config " + path);
  return Config::parse(in);
}

Element cyc(const Group& g, const std::string& text) { return g.parse(text); }

std::string show(std::uint64_t v) { return std::to_string(v); }

// --------------------------------------------------------------- criterion 1
// Right shift on restricted Heisenberg powers: the bundled configs must come
// back AdditiveExact with the integer growth patterns 2*4=8 and 3*9=27.

void criterion_heisenberg(Criterion& c, const std::string& dir) {
  auto run_one = [&](const std::string& file, const std::string& identity,
                     std::uint64_t br, std::uint64_t bq, std::uint64_t bt,
                     std::size_t chain_len) {
    Config cfg = load_config(dir, file);
    RunSettings run = resolve_run(cfg);
    c.expect(run.options.depth == 2, file + ": depth is not 2");
    Group g = resolve_group(cfg, run.options.budget);
    Endo phi = resolve_endo(cfg, g, run.options.seed);
    auto sub = resolve_subgroup(cfg, g);
    c.expect(sub.has_value(), file + ": no [subgroup] section");
    if (!sub) return;
    auto chain = resolve_exhaustion(cfg, g, run.options.budget);
    c.expect(chain.size() == chain_len, file + ": unexpected chain length");

    ATReport rep = at_check(phi, *sub, chain, run.options);
    c.expect(rep.verdict == Verdict::AdditiveExact,
             file + ": verdict " + verdict_name(rep.verdict));
    c.expect(run.expected_verdict && rep.verdict == *run.expected_verdict,
             file + ": config expectation not met");
    c.expect(rep.exact_identity == identity,
             file + ": growth identity " + rep.exact_identity);
    c.expect(rep.restricted.growth_base == br &&
                 rep.quotient.growth_base == bq && rep.total.growth_base == bt,
             file + ": growth bases " + show(rep.restricted.growth_base) + "/" +
                 show(rep.quotient.growth_base) + "/" +
                 show(rep.total.growth_base));
    c.expect(rep.total_value == std::log(static_cast<double>(bt)),
             file + ": total value is not log " + show(bt));
    c.expect(rep.sum_value == std::log(static_cast<double>(br)) +
                                  std::log(static_cast<double>(bq)),
             file + ": restricted + quotient value drifted");
  };

  run_one("heisenberg_shift_at.cfg", "2 * 4 = 8", 2, 4, 8, 2);
  run_one("heisenberg3_shift_at.cfg", "3 * 9 = 27", 3, 9, 27, 1);

  struct rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  c.expect(usage.ru_maxrss < kMaxRssKb,
           "peak rss " + std::to_string(usage.ru_maxrss) + " KB");
}

// --------------------------------------------------------------- criterion 2
// Bernoulli shift on the restricted power of Z/2: |T_n| = 2^n on the nose,
// so every dyadic bound is exactly log 2.

void criterion_bernoulli(Criterion& c) {
  Group g = Group::restricted_power(BaseGroup::cyclic(2), IndexSet::Naturals);
  Endo shift = Endo::shift_right(g);
  ElementSet x({g.identity(), g.parse("@0:1")});

  EntropyEstimate est = dyadic_sequence(shift, x, 4, default_budget());
  c.expect(est.trace.size() == 16, "trace stops early");
  for (std::size_t i = 0; i < est.trace.size(); ++i)
    c.expect(est.trace[i] == (std::uint64_t{1} << (i + 1)),
             "|T_" + std::to_string(i + 1) + "| = " + show(est.trace[i]));
  c.expect(est.dyadic.size() == 5, "missing dyadic points");
  for (const DyadicPoint& p : est.dyadic) {
    c.expect(p.cardinality == (std::uint64_t{1} << p.n),
             "|T_" + show(p.n) + "| = " + show(p.cardinality));
    c.expect(p.d == std::log(2.0),
             "d_" + std::to_string(p.k) + " is not exactly log 2");
  }
  c.expect(est.exact.kind == ExactKind::ExactLinear &&
               est.exact.growth_base == 2 && est.exact.growth_coeff == 1,
           "growth 2^n not recognized");
  c.expect(est.value() == std::log(2.0), "estimate value is not log 2");
}

// --------------------------------------------------------------- criterion 3
// Identity on the lamplighter against its base: the restriction is zero on
// every finite subgroup, the quotient stays tame, yet the finitely generated
// side grows geometrically, so additivity fails with a concrete witness.

void criterion_lamplighter(Criterion& c, const std::string& dir) {
  Config cfg = load_config(dir, "lamplighter_id.cfg");
  RunSettings run = resolve_run(cfg);
  Group g = resolve_group(cfg, run.options.budget);
  Endo phi = resolve_endo(cfg, g, run.options.seed);
  auto sub = resolve_subgroup(cfg, g);
  c.expect(sub.has_value(), "no [subgroup] section");
  if (!sub) return;
  auto chain = resolve_exhaustion(cfg, g, run.options.budget);
  c.expect(chain.size() == 4, "expected windows 1..3 plus the mobile set");

  ATReport rep = at_check(phi, *sub, chain, run.options);
  c.expect(rep.verdict == Verdict::FailureWitness,
           std::string("verdict ") + verdict_name(rep.verdict));
  c.expect(run.expected_verdict && rep.verdict == *run.expected_verdict,
           "config expectation not met");

  // the restriction to the base certifies zero on every entry
  c.expect(rep.restricted.estimates.size() == 4, "missing restricted entries");
  for (const EntropyEstimate& est : rep.restricted.estimates)
    c.expect(est.exact.kind == ExactKind::ZeroCertificate,
             "a restricted entry has no zero certificate");

  // the mobile entry meets 2n+1 cosets of the base after n steps, so its
  // dyadic bounds log(2*2^k + 1)/2^k sink toward zero
  const EntropyEstimate& quot = rep.quotient.estimates.back();
  c.expect(quot.trace.size() == 16, "quotient trace stops early");
  for (std::size_t i = 0; i < quot.trace.size(); ++i)
    c.expect(quot.trace[i] == 2 * (i + 1) + 1,
             "coset count at n=" + std::to_string(i + 1) + " is " +
                 show(quot.trace[i]));
  c.expect(quot.dyadic.size() == 5, "missing quotient dyadic points");
  for (std::size_t k = 1; k < quot.dyadic.size(); ++k) {
    c.expect(quot.dyadic[k].cardinality ==
                 2 * (std::uint64_t{1} << k) + 1,
             "quotient dyadic cardinality at k=" + std::to_string(k));
    c.expect(quot.dyadic[k].d < quot.dyadic[k - 1].d,
             "quotient bounds not strictly decreasing at k=" +
                 std::to_string(k));
  }

  // the total side keeps growing: every ratio through n = 5..14 clears 1.5
  c.expect(rep.growth_entry == "extra", "growth witnessed on " + rep.growth_entry);
  c.expect(rep.growth_ratios.size() == 10, "expected ratios for n = 5..14");
  for (double r : rep.growth_ratios)
    c.expect(r >= kGrowthFloor, "growth ratio " + std::to_string(r));
  c.expect(rep.total.estimates.back().trace == kLampBall,
           "ball sizes disagree with the independent enumeration");
}

// --------------------------------------------------------------- criterion 4
// The coset-counting calculus, 500 seeded trials per clause over S5, every
// comparison exact integer arithmetic.

void criterion_lemmas(Criterion& c) {
  LemmaSuiteOptions opt;
  opt.seed = 0x5eed;
  opt.trials = 500;
  opt.s5_only = true;
  LemmaSuiteReport rep = lemma_property_suite(opt);
  c.expect(rep.clauses.size() == 11, "clause list changed");
  for (const ClauseResult& cl : rep.clauses) {
    c.expect(cl.passed == 500, cl.name + " passed " + std::to_string(cl.passed));
    c.expect(cl.failed == 0, cl.name + ": " + cl.counterexample);
  }
  c.expect(rep.all_passed(), "suite reports failures");
}

// --------------------------------------------------------------- criterion 5
// Central factor identity T_n(EB) = T_n(E) * T_n(B) and the resulting
// cardinality bound, exact at n = 2, 4, 8 on two instances.

void criterion_central(Criterion& c) {
  ATOptions opt;

  Group g2 = Group::restricted_power(BaseGroup::heisenberg(2), IndexSet::Naturals);
  Endo shift = Endo::shift_right(g2);
  ElementSet e2({g2.identity(), g2.parse("@0:0,0,1")});
  ElementSet b2({g2.identity(), g2.parse("@0:1,0,0")});
  CenReport shift_rep = check_cen_inequality(shift, center_spec(g2), e2, b2, 8, opt);
  c.expect(shift_rep.holds, "shift instance: some row failed");
  c.expect(shift_rep.rows.size() == 8, "shift instance: missing rows");
  for (std::uint64_t n : {2, 4, 8}) {
    const CenRow& row = shift_rep.rows[n - 1];
    c.expect(row.product_exact, "shift n=" + show(n) + ": set identity broken");
    c.expect(row.count_exact && row.bound_ok, "shift n=" + show(n) + ": bound");
    c.expect(row.card_e == (std::uint64_t{1} << n) &&
                 row.card_b == (std::uint64_t{1} << n) &&
                 row.card_eb == (std::uint64_t{1} << (2 * n)),
             "shift n=" + show(n) + ": cardinalities " + show(row.card_e) + "," +
                 show(row.card_b) + "," + show(row.card_eb));
  }

  Group g3 = Group::restricted_power(BaseGroup::heisenberg(3), IndexSet::Naturals);
  Endo id3 = Endo::identity(g3);
  ElementSet e3({g3.identity(), g3.parse("@0:0,0,1"), g3.parse("@0:0,0,2")});
  ElementSet b3({g3.identity(), g3.parse("@0:1,0,0"), g3.parse("@0:0,1,0")});
  CenReport sat = check_cen_inequality(id3, center_spec(g3), e3, b3, 8, opt);
  c.expect(sat.holds, "saturation instance: some row failed");
  for (std::uint64_t n : {2, 4, 8}) {
    const CenRow& row = sat.rows[n - 1];
    c.expect(row.product_exact && row.bound_ok, "saturation n=" + show(n));
  }
  const CenRow& last = sat.rows.back();
  c.expect(last.card_eb == 27 && last.card_e == 3 && last.cosets_b_mod_n == 9,
           "saturation endpoint " + show(last.card_e) + "*" +
               show(last.cosets_b_mod_n) + " vs " + show(last.card_eb));
  c.expect(last.card_e * last.cosets_b_mod_n == last.card_eb,
           "saturation endpoint misses equality");
}

// --------------------------------------------------------------- criterion 6
// Closure decomposition <T> = T * E and the coset sandwich, on the
// Heisenberg power (where every set involved is a subgroup) and on S4
// (where T_2(E) fails to be one and the pairwise fallback takes over).

void criterion_chain(Criterion& c) {
  ATOptions opt;

  Group g = Group::restricted_power(BaseGroup::heisenberg(2), IndexSet::Naturals);
  Endo shift = Endo::shift_right(g);
  MettorReport m1 = check_mettor_chain(shift, window_subgroup(g, 1), 1, 2, opt);
  c.expect(m1.holds, "heisenberg chain does not hold");
  c.expect(m1.card_t == 64 && m1.closure_card == 64, "heisenberg closure size");
  c.expect(m1.e_card == 4 && m1.s_card == 8, "heisenberg correction sizes");
  c.expect(m1.ell_t_derived == 16 && m1.ell_t_s == 16 && m1.ell_match,
           "heisenberg coset counts " + show(m1.ell_t_derived) + " vs " +
               show(m1.ell_t_s));
  c.expect(m1.sandwich.size() == 2, "heisenberg sandwich rows");
  if (m1.sandwich.size() == 2) {
    c.expect(m1.sandwich[0].card_d == 64 && m1.sandwich[0].classes_mid == 16 &&
                 m1.sandwich[0].card_e == 8 && m1.sandwich[0].sandwich_ok,
             "heisenberg sandwich row k=1");
    c.expect(m1.sandwich[1].card_d == 4096 && m1.sandwich[1].classes_mid == 256 &&
                 m1.sandwich[1].card_e == 32 && m1.sandwich[1].sandwich_ok,
             "heisenberg sandwich row k=2");
  }

  Group s4 = Group::finite_permutation(
      4, {detail::parse_cycles("(1,2)"), detail::parse_cycles("(1,2,3,4)")});
  Endo inner = Endo::inner(s4, cyc(s4, "(1,2,3,4)"));
  ElementSet d = subgroup_closure(s4, ElementSet({cyc(s4, "(1,2)")}));
  MettorReport m2 = check_mettor_chain(inner, d, 1, 2, opt);
  c.expect(m2.holds, "S4 chain does not hold");
  c.expect(m2.card_t == 4 && m2.closure_card == 6, "S4 trajectory/closure sizes");
  c.expect(m2.e_card == 3 && m2.s_card == 9, "S4 correction sizes");
  c.expect(m2.ell_t_derived == 2 && m2.ell_t_s == 2 && m2.ell_match,
           "S4 coset counts");
  c.expect(!m2.notes.empty(), "S4 run should note the non-subgroup fallback");
}

// --------------------------------------------------------------- criterion 7
// Stabilized quotients reduce to a finite correction subgroup (exact set
// inclusions for five steps), and inner maps on the finitary symmetric group
// land in the trivially additive bucket.

void criterion_reduction(Criterion& c) {
  ATOptions opt;

  Group fs = Group::finitary_symmetric();
  Endo swap12 = Endo::inner(fs, cyc(fs, "(1,2)"));
  ElementSet e_fs = subgroup_closure(fs, ElementSet({cyc(fs, "(1,2,3)")}));
  ZeroReductionReport r1 = check_zero_reduction(swap12, alt_spec(fs), e_fs, 8, 5, opt);
  c.expect(r1.holds, "finitary symmetric reduction does not hold");
  c.expect(r1.inclusion_ok.size() == 5, "finitary symmetric: missing steps");
  for (std::size_t k = 0; k < r1.inclusion_ok.size(); ++k)
    c.expect(r1.inclusion_ok[k], "inclusion fails at k=" + std::to_string(k + 1));
  c.expect(r1.e2_in_h, "correction subgroup leaves the alternating part");

  Group s4 = Group::finite_permutation(
      4, {detail::parse_cycles("(1,2)"), detail::parse_cycles("(1,2,3,4)")});
  Endo rot = Endo::inner(s4, cyc(s4, "(1,2,3)"));
  ElementSet e_s4 = subgroup_closure(s4, ElementSet({cyc(s4, "(1,2)")}));
  ZeroReductionReport r2 = check_zero_reduction(rot, derived_spec(s4), e_s4, 8, 5, opt);
  c.expect(r2.holds, "S4 reduction does not hold");
  c.expect(r2.m == 1, "S4 quotient stabilizes at m=" + std::to_string(r2.m));
  c.expect(r2.f_card == 2 && r2.e2_card == 3 && r2.e2_in_h,
           "S4 correction data " + show(r2.f_card) + "/" + show(r2.e2_card));
  for (std::size_t k = 0; k < r2.inclusion_ok.size(); ++k)
    c.expect(r2.inclusion_ok[k], "S4 inclusion fails at k=" + std::to_string(k + 1));

  // conjugation inside the finitary symmetric group is additive for free:
  // both sides stabilize and the index-2 quotient never spreads
  std::vector<ExhaustionEntry> chain;
  for (int w : {2, 3, 4})
    chain.push_back({"window" + std::to_string(w), window_subgroup(fs, w)});
  ATReport rep = at_check(swap12, alt_spec(fs), chain, opt);
  c.expect(rep.verdict == Verdict::AdditiveExact,
           std::string("finitary symmetric verdict ") + verdict_name(rep.verdict));
  c.expect(rep.exact_identity == "1 * 1 = 1",
           "finitary symmetric identity " + rep.exact_identity);
  for (const HEvidence* side : {&rep.total, &rep.restricted, &rep.quotient})
    for (const EntropyEstimate& est : side->estimates)
      c.expect(est.exact.kind == ExactKind::ZeroCertificate,
               "an estimate misses its zero certificate");
  for (const EntropyEstimate& est : rep.quotient.estimates)
    for (std::uint64_t cosets : est.trace)
      c.expect(cosets <= 2, "quotient spreads over " + show(cosets) + " cosets");
}

// --------------------------------------------------------------- criterion 8
// Structural invariances on randomized instances: conjugating the map and
// the set leaves every trajectory cardinality unchanged, and growing the set
// grows every trajectory.

void criterion_invariance(Criterion& c) {
  Group s5 = Group::finite_permutation(
      5, {detail::parse_cycles("(1,2)"), detail::parse_cycles("(1,2,3,4,5)")});
  Group lamp = Group::lamplighter();
  Group heis = Group::restricted_power(BaseGroup::heisenberg(2), IndexSet::Naturals);
  Group fs = Group::finitary_symmetric();
  const std::size_t budget = default_budget();

  auto random_set = [](const Group& g, Rng& rng, int size) {
    std::vector<Element> v{g.identity()};
    for (int i = 0; i < size; ++i) v.push_back(g.random_element(rng));
    return ElementSet(std::move(v));
  };
  auto pick_endo = [](const Group& g, Rng& rng) {
    if (g.kind() == Group::Kind::RestrictedPower) return Endo::shift_right(g);
    if (rng.coin()) return Endo::inner(g, g.random_element(rng));
    return Endo::identity(g);
  };

  int conj_failures = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(9000 + i);
    const Group& g = i % 4 == 0 ? s5 : i % 4 == 1 ? lamp : i % 4 == 2 ? heis : fs;
    ElementSet x = random_set(g, rng, 2);
    Endo phi = pick_endo(g, rng);
    Endo xi = Endo::inner(g, g.random_element(rng));

    EntropyEstimate plain = dyadic_sequence(phi, x, 2, budget);
    EntropyEstimate moved =
        dyadic_sequence(phi.conjugated(xi), xi.apply_set(x), 2, budget);
    bool same = plain.trace == moved.trace &&
                plain.dyadic.size() == moved.dyadic.size();
    for (std::size_t k = 0; same && k < plain.dyadic.size(); ++k)
      same = plain.dyadic[k].cardinality == moved.dyadic[k].cardinality;
    if (!same) ++conj_failures;
  }
  c.expect(conj_failures == 0,
           std::to_string(conj_failures) + " conjugation instances diverged");

  int mono_failures = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(17000 + i);
    const Group& g = i % 4 == 0 ? s5 : i % 4 == 1 ? lamp : i % 4 == 2 ? heis : fs;
    ElementSet x = random_set(g, rng, 2);
    ElementSet y = x;
    y.insert(g.random_element(rng));
    y.insert(g.random_element(rng));
    Endo phi = pick_endo(g, rng);

    bool ok = true;
    for (int n = 1; n <= 4 && ok; ++n)
      ok = trajectory(phi, x, n, budget).subset_of(trajectory(phi, y, n, budget));
    if (!ok) ++mono_failures;
  }
  c.expect(mono_failures == 0,
           std::to_string(mono_failures) + " monotonicity instances failed");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <configs-dir>\n";
    return 2;
  }
  std::string dir = argv[1];

  std::vector<Criterion> results;
  auto run = [&](const std::string& name, auto&& body, double limit = 0.0) {
    Criterion c;
    c.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.seconds = seconds_since(t0);
    if (limit > 0.0)
      c.expect(c.seconds < limit, "took " + std::to_string(c.seconds) +
                                      "s, limit " + std::to_string(limit) + "s");
    results.push_back(std::move(c));
  };

  run("1 heisenberg powers, shift, additive with exact flags",
      [&](Criterion& c) { criterion_heisenberg(c, dir); }, kMaxSecondsFlagship);
  run("2 bernoulli shift, every dyadic bound exactly log 2",
      [&](Criterion& c) { criterion_bernoulli(c); }, kMaxSecondsBernoulli);
  run("3 lamplighter identity, additivity failure witness",
      [&](Criterion& c) { criterion_lamplighter(c, dir); });
  run("4 coset calculus, 500 exact trials per clause over S5",
      [&](Criterion& c) { criterion_lemmas(c); }, kMaxSecondsLemmas);
  run("5 central factor product identity and lower bound",
      [&](Criterion& c) { criterion_central(c); });
  run("6 closure decomposition and coset sandwich",
      [&](Criterion& c) { criterion_chain(c); });
  run("7 stabilized quotient reduction and inner-map additivity",
      [&](Criterion& c) { criterion_reduction(c); });
  run("8 conjugation invariance and set monotonicity, 100 instances each",
      [&](Criterion& c) { criterion_invariance(c); });

  int failed = 0;
  for (const Criterion& c : results) {
    char line[32];
    std::snprintf(line, sizeof line, "%6.2fs", c.seconds);
    std::cout << (c.ok ? "PASS" : "FAIL") << "  criterion " << c.name << "  ("
              << line << ")\n";
    if (!c.ok) {
      ++failed;
      for (const std::string& p : c.problems)
        std::cerr << "  criterion " << c.name << ": " << p << "\n";
    }
  }
  std::cout << (failed == 0 ? "acceptance: all criteria passed"
                            : "acceptance: " + std::to_string(failed) +
                                  " criterion(s) failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}

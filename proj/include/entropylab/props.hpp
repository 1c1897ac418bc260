#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "entropylab/at.hpp"

namespace entropylab {

// ---------------------------------------------------------------------------
// Randomized property suite for the coset-counting calculus and the
// trajectory identities, run over a small zoo of concrete groups.  Every
// check is an exact integer comparison.  The corrupt switch deliberately
// damages two of the computed sets so a run can demonstrate that violations
// are actually caught.

struct LemmaSuiteOptions {
  std::uint64_t seed = 42;
  int trials = 500;
  std::size_t budget = 1 << 16;
  bool corrupt = false;
  bool s5_only = false;  // draw every trial from S5 instead of the whole pool
};

struct ClauseResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::string counterexample;  // first failing instance, if any
};

struct LemmaSuiteReport {
  std::vector<ClauseResult> clauses;
  int total_passed = 0;
  int total_failed = 0;
  bool all_passed() const { return total_failed == 0; }
};

namespace detail {

struct SuiteContext {
  std::vector<Group> pool;
  LemmaSuiteOptions opt;
  Rng rng;

  explicit SuiteContext(const LemmaSuiteOptions& o) : opt(o), rng(o.seed) {
    auto gens = [](std::initializer_list<const char*> cycles) {
      std::vector<Element> out;
      for (const char* c : cycles) out.push_back(parse_cycles(c));
      return out;
    };
    pool.push_back(Group::finite_permutation(5, gens({"(1,2)", "(1,2,3,4,5)"})));
    if (o.s5_only) return;
    pool.push_back(Group::finite_permutation(3, gens({"(1,2)", "(1,2,3)"})));
    pool.push_back(Group::finite_permutation(4, gens({"(1,2)", "(1,2,3,4)"})));
    pool.push_back(Group::finite_permutation(4, gens({"(1,2,3,4)", "(1,3)"})));
    // quaternion group in its regular representation
    pool.push_back(Group::finite_permutation(
        8, gens({"(1,3,2,4)(5,7,6,8)", "(1,5,2,6)(3,8,4,7)"})));
    pool.push_back(Group::restricted_power(BaseGroup::cyclic(4), IndexSet::Naturals));
    pool.push_back(Group::restricted_power(BaseGroup::cyclic(2), IndexSet::Integers));
  }

  ElementSet random_subset(const Group& g, int max_size) {
    std::vector<Element> v;
    int size = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_size)));
    for (int i = 0; i < size; ++i) v.push_back(g.random_element(rng));
    return ElementSet(std::move(v));
  }

  ElementSet random_subgroup(const Group& g) {
    for (int attempts = 0; attempts < 4; ++attempts) {
      std::vector<Element> gens{g.random_element(rng)};
      if (attempts < 2 && rng.coin()) gens.push_back(g.random_element(rng));
      try {
        return subgroup_closure(g, ElementSet(std::move(gens)), 4096);
      } catch (const BudgetExceeded&) {
        // unlucky generators; retry smaller
      }
    }
    return ElementSet(std::vector<Element>{g.identity()});
  }

  // Left-coset counts only compose across products along normal subgroups:
  // x1 B = x2 B does not force x1 x' B = x2 x' B unless B absorbs
  // conjugation by x'.  The product clauses therefore shrink a candidate
  // subgroup to its normal core (the largest normal subgroup inside it).
  // The restricted powers in the pool are abelian, so only the permutation
  // families need the filter.
  ElementSet normal_core(const Group& g, const ElementSet& b) {
    if (g.kind() != Group::Kind::FinitePermutation) return b;
    if (b.size() == g.elements().size()) return b;
    std::vector<Element> kept;
    for (const Element& e : b) {
      bool invariant = true;
      for (const Element& x : g.elements()) {
        if (!b.contains(g.mul(g.mul(x, e), g.inv(x)))) {
          invariant = false;
          break;
        }
      }
      if (invariant) kept.push_back(e);
    }
    return ElementSet(std::move(kept));
  }

  Endo random_endo(const Group& g) {
    switch (g.kind()) {
      case Group::Kind::FinitePermutation: {
        if (rng.coin()) return Endo::inner(g, g.random_element(rng));
        return Endo::identity(g);
      }
      case Group::Kind::RestrictedPower: {
        std::size_t pick = rng.index(3);
        if (pick == 0) return Endo::identity(g);
        if (pick == 1) return Endo::shift_right(g);
        if (g.base().order() == 4) return Endo::coordinatewise_power(g, 3);
        return Endo::identity(g);
      }
      default:
        return Endo::identity(g);
    }
  }
};

inline std::string describe_sets(const Group& g, const char* xn, const ElementSet& x,
                                 const char* bn, const ElementSet& b) {
  std::ostringstream os;
  os << g.describe() << " " << xn << "={";
  std::size_t shown = 0;
  for (const Element& e : x) {
    if (shown++) os << ",";
    if (shown > 6) {
      os << "...";
      break;
    }
    os << g.format(e);
  }
  os << "} " << bn << "=" << b.size() << " elements";
  return os.str();
}

inline void record(ClauseResult& clause, bool ok, const std::string& witness) {
  if (ok) {
    ++clause.passed;
  } else {
    ++clause.failed;
    if (clause.counterexample.empty()) clause.counterexample = witness;
  }
}

}  // namespace detail

inline LemmaSuiteReport lemma_property_suite(const LemmaSuiteOptions& opt) {
  detail::SuiteContext ctx(opt);
  LemmaSuiteReport rep;
  rep.clauses = {
      {"ell_increasing_in_X", 0, 0, ""},   {"ell_decreasing_in_B", 0, 0, ""},
      {"ell_product_exact", 0, 0, ""},     {"ell_submultiplicative", 0, 0, ""},
      {"ell_joint_subgroup", 0, 0, ""},    {"ell_endomorphism", 0, 0, ""},
      {"trajectory_monotone", 0, 0, ""},   {"dyadic_decreasing", 0, 0, ""},
      {"quotient_dyadic_decreasing", 0, 0, ""},
      {"conjugation_invariance", 0, 0, ""},
      {"symmetric_back_trajectory", 0, 0, ""},
  };
  ClauseResult& cl_inc = rep.clauses[0];
  ClauseResult& cl_dec = rep.clauses[1];
  ClauseResult& cl_prod = rep.clauses[2];
  ClauseResult& cl_sub = rep.clauses[3];
  ClauseResult& cl_joint = rep.clauses[4];
  ClauseResult& cl_endo = rep.clauses[5];
  ClauseResult& cl_mono = rep.clauses[6];
  ClauseResult& cl_dyad = rep.clauses[7];
  ClauseResult& cl_qdyad = rep.clauses[8];
  ClauseResult& cl_conj = rep.clauses[9];
  ClauseResult& cl_back = rep.clauses[10];

  for (int trial = 0; trial < opt.trials; ++trial) {
    const Group& g = ctx.pool[ctx.rng.index(ctx.pool.size())];
    ElementSet x = ctx.random_subset(g, 3);
    ElementSet x2 = ctx.random_subset(g, 3);
    ElementSet b = ctx.random_subgroup(g);
    ElementSet b2 = ctx.random_subgroup(g);

    ElementSet x_union = x;
    for (const Element& e : x2) x_union.insert(e);
    ElementSet b_big = [&] {
      try {
        ElementSet seed = b;
        seed.insert(g.random_element(ctx.rng));
        return subgroup_closure(g, seed, 4096);
      } catch (const BudgetExceeded&) {
        return b;
      }
    }();

    std::uint64_t x_mod_b = ell_mod_set(g, x, b).count;

    // increasing in the set argument, decreasing in the subgroup argument
    detail::record(cl_inc, x_mod_b <= ell_mod_set(g, x_union, b).count,
                   detail::describe_sets(g, "X", x, "B", b));
    detail::record(cl_dec, ell_mod_set(g, x, b_big).count <= x_mod_b,
                   detail::describe_sets(g, "X", x, "Bbig", b_big));

    // ell(XB) = ell(X, B) + ell(B), exactly
    {
      ElementSet xb = product_set(g, x, b, opt.budget);
      if (opt.corrupt && xb.size() >= 2) {
        std::vector<Element> v(xb.begin(), xb.end());
        v.pop_back();
        xb = ElementSet(std::move(v));
      }
      bool ok = checked_mul(x_mod_b, b.size()).value_or(0) == xb.size();
      detail::record(cl_prod, ok, detail::describe_sets(g, "X", x, "B", b));
    }

    // ell(XX', N) <= ell(X, N) + ell(X', N) for normal N; counting along a
    // non-normal subgroup can overshoot, so core the drawn subgroup first
    ElementSet nb = ctx.normal_core(g, b);
    {
      ElementSet xx = product_set(g, x, x2, opt.budget);
      bool ok = ell_mod_set(g, xx, nb).count <=
                checked_mul(ell_mod_set(g, x, nb).count,
                            ell_mod_set(g, x2, nb).count)
                    .value_or(~0ull);
      detail::record(cl_sub, ok, detail::describe_sets(g, "XX'", xx, "N", nb));
    }

    // ell(XX', NN') <= ell(X, N) + ell(X', N'); NN' is a subgroup because
    // both factors are normal, but keep the guard in case a core came back
    // degenerate
    {
      ElementSet nb2 = ctx.normal_core(g, b2);
      ElementSet bb = product_set(g, nb, nb2, opt.budget);
      if (!is_subgroup(g, bb)) {
        nb2 = nb;  // fall back to NN' = N, which is always a subgroup
        bb = nb;
      }
      ElementSet xx = product_set(g, x, x2, opt.budget);
      bool ok = ell_mod_set(g, xx, bb).count <=
                checked_mul(ell_mod_set(g, x, nb).count,
                            ell_mod_set(g, x2, nb2).count)
                    .value_or(~0ull);
      detail::record(cl_joint, ok, detail::describe_sets(g, "XX'", xx, "NN'", bb));
    }

    // ell(phi X, phi B) <= ell(X, B)
    Endo phi = ctx.random_endo(g);
    {
      ElementSet px = phi.apply_set(x);
      ElementSet pb = phi.apply_set(b);
      bool ok = is_subgroup(g, pb) && ell_mod_set(g, px, pb).count <= x_mod_b;
      detail::record(cl_endo, ok, detail::describe_sets(g, "phiX", px, "phiB", pb));
    }

    ElementSet x1 = x;
    x1.insert(g.identity());

    // 1 in X makes trajectories nested
    {
      bool ok = true;
      ElementSet prev = trajectory(phi, x1, 1, opt.budget);
      for (int n = 2; n <= 4 && ok; ++n) {
        ElementSet cur = trajectory(phi, x1, n, opt.budget);
        if (opt.corrupt && cur.size() >= 2) {
          std::vector<Element> v(cur.begin(), cur.end());
          v.erase(v.begin());  // drop the identity, always present
          cur = ElementSet(std::move(v));
        }
        ok = prev.subset_of(cur);
        prev = std::move(cur);
      }
      detail::record(cl_mono, ok, detail::describe_sets(g, "X", x1, "B", b));
    }

    // dyadic bounds decrease: c_{k+1} <= c_k^2 on the nose
    {
      EntropyEstimate est = dyadic_sequence(phi, x1, 2, opt.budget);
      bool ok = true;
      for (std::size_t i = 1; i < est.dyadic.size(); ++i) {
        auto sq = checked_mul(est.dyadic[i - 1].cardinality,
                              est.dyadic[i - 1].cardinality);
        if (sq && est.dyadic[i].cardinality > *sq) ok = false;
      }
      detail::record(cl_dyad, ok, detail::describe_sets(g, "X", x1, "B", b));
    }

    // and likewise for the quotient bounds mod the derived subgroup
    {
      EntropyEstimate est =
          dyadic_sequence_mod(phi, x1, derived_spec(g), 2, opt.budget);
      bool ok = true;
      for (std::size_t i = 1; i < est.dyadic.size(); ++i) {
        auto sq = checked_mul(est.dyadic[i - 1].cardinality,
                              est.dyadic[i - 1].cardinality);
        if (sq && est.dyadic[i].cardinality > *sq) ok = false;
      }
      detail::record(cl_qdyad, ok, detail::describe_sets(g, "X", x1, "B", b));
    }

    // conjugating phi and the set by an automorphism preserves cardinalities
    {
      Endo xi = Endo::inner(g, g.random_element(ctx.rng));
      Endo psi = phi.conjugated(xi);
      ElementSet xix = xi.apply_set(x1);
      bool ok = true;
      for (int n = 1; n <= 3 && ok; ++n)
        ok = trajectory(psi, xix, n, opt.budget).size() ==
             trajectory(phi, x1, n, opt.budget).size();
      detail::record(cl_conj, ok, detail::describe_sets(g, "X", x1, "B", b));
    }

    // for symmetric X the reversed trajectory is the inverse set
    {
      ElementSet xs = x1;
      for (const Element& e : x1) xs.insert(g.inv(e));
      bool ok = true;
      for (int n = 1; n <= 3 && ok; ++n) {
        ElementSet fwd = trajectory(phi, xs, n, opt.budget);
        std::vector<Element> inv_v;
        for (const Element& e : fwd) inv_v.push_back(g.inv(e));
        ok = ElementSet(std::move(inv_v)) == back_trajectory(phi, xs, n, opt.budget);
      }
      detail::record(cl_back, ok, detail::describe_sets(g, "Xs", xs, "B", b));
    }
  }

  for (const ClauseResult& c : rep.clauses) {
    rep.total_passed += c.passed;
    rep.total_failed += c.failed;
  }
  return rep;
}

}  // namespace entropylab

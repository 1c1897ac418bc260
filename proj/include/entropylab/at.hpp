#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "entropylab/entropy.hpp"

namespace entropylab {

// ---------------------------------------------------------------------------
// Addition theorem harness: compare evidence for h(phi) against
// h(phi restricted to H) + h(induced map on G/H).

enum class Verdict {
  AdditiveExact,            // integer growth bases with r_H * r_Q == r_T
  AdditiveWithinTolerance,  // float sum matches within tolerance
  InequalityOnly,           // only the sum <= total direction is supported
  FailureWitness,           // evidence the identity fails on this instance
  Inconclusive,
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::AdditiveExact: return "AdditiveExact";
    case Verdict::AdditiveWithinTolerance: return "AdditiveWithinTolerance";
    case Verdict::InequalityOnly: return "InequalityOnly";
    case Verdict::FailureWitness: return "FailureWitness";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

inline Verdict verdict_from_name(const std::string& s) {
  for (Verdict v : {Verdict::AdditiveExact, Verdict::AdditiveWithinTolerance,
                    Verdict::InequalityOnly, Verdict::FailureWitness,
                    Verdict::Inconclusive})
    if (s == verdict_name(v)) return v;
  throw ConfigError("unknown verdict name '" + s + "'");
}

struct ATOptions {
  int depth = 4;
  std::size_t budget = default_budget();
  double tolerance = 1e-9;
  // total-side growth witness: all ratios |T_{n+1}|/|T_n| for n in
  // [growth_lo, growth_hi] must clear the threshold
  double growth_threshold = 1.5;
  int growth_lo = 5;
  int growth_hi = 14;
  std::uint64_t seed = kDefaultValidationSeed;
  int validation_pairs = kDefaultValidationPairs;
};

struct WitnessRow {
  std::uint64_t n = 0;
  std::uint64_t total = 0;       // |T_n(phi, X u {1})|
  std::uint64_t restricted = 0;  // |T_n(phi, (X n H) u {1})|
  std::uint64_t cosets = 0;      // cosets of H met by T_n
};

struct ATReport {
  std::string subgroup;
  HEvidence total, restricted, quotient;
  double total_value = 0.0;
  double sum_value = 0.0;  // restricted + quotient
  Verdict verdict = Verdict::Inconclusive;
  std::string exact_identity;       // e.g. "2 * 4 = 8" when AdditiveExact
  std::vector<WitnessRow> witness;  // traces of the last exhaustion entry
  std::string growth_entry;         // entry whose ratios witnessed the failure
  std::vector<double> growth_ratios;
  std::vector<std::string> notes;
};

namespace detail {

inline HEvidence aggregate_evidence(std::vector<std::string> labels,
                                    std::vector<EntropyEstimate> ests) {
  HEvidence ev;
  ev.labels = std::move(labels);
  ev.estimates = std::move(ests);
  ev.all_exact = true;
  for (const EntropyEstimate& est : ev.estimates) {
    ev.all_exact = ev.all_exact && est.exact.is_exact();
    ev.any_budget_hit = ev.any_budget_hit || est.budget_hit;
    ev.value = std::max(ev.value, est.value());
    if (est.exact.is_exact())
      ev.growth_base = std::max(ev.growth_base, est.exact.growth_base);
  }
  if (!ev.all_exact) ev.growth_base = 1;
  return ev;
}

// sampled check that phi maps H into H
inline void validate_invariant(const Endo& phi, const SubgroupSpec& h, Rng& rng,
                               int pairs) {
  if (!h.sample) return;
  for (int i = 0; i < pairs; ++i) {
    Element m = h.sample(rng);
    if (!h.membership(phi.apply(m)))
      throw NotInvariant("subgroup '" + h.name + "' is not invariant: " +
                         phi.group().format(m) + " maps outside");
  }
}

// strictly decreasing dyadic bounds, compared exactly: d_{k+1} < d_k iff
// c_{k+1} < c_k^2 (c_k^2 overflowing 64 bits counts as satisfied, since any
// computed cardinality fits)
inline bool strictly_decreasing_dyadics(const EntropyEstimate& est) {
  if (est.dyadic.size() < 2) return false;
  for (std::size_t i = 1; i < est.dyadic.size(); ++i) {
    auto sq = checked_mul(est.dyadic[i - 1].cardinality,
                          est.dyadic[i - 1].cardinality);
    if (sq && est.dyadic[i].cardinality >= *sq) return false;
  }
  return true;
}

}  // namespace detail

inline ATReport at_check(const Endo& phi, const SubgroupSpec& h,
                         const std::vector<ExhaustionEntry>& entries,
                         const ATOptions& opt) {
  if (entries.empty()) throw ConfigError("empty exhaustion chain");
  const Group& g = phi.group();
  Rng rng(opt.seed);
  validate_normal(g, h, rng, opt.validation_pairs);
  detail::validate_invariant(phi, h, rng, opt.validation_pairs);

  ATReport rep;
  rep.subgroup = h.name;

  // one accumulator pass per entry serves both the total and the quotient
  // estimates; the restricted side runs on the filtered sets
  std::vector<std::string> labels;
  std::vector<EntropyEstimate> total_ests, quot_ests, restr_ests;
  for (const ExhaustionEntry& entry : entries) {
    labels.push_back(entry.label);
    bool inserted = false;
    ElementSet x1 = detail::with_identity(entry.set, &inserted);
    if (!h.has_key())
      throw ConfigError("at_check requires a coset key for subgroup '" + h.name + "'");
    TrajectoryAccumulator acc(phi, x1, opt.budget, &h);
    EntropyEstimate total = detail::estimate_from_accumulator(acc, opt.depth, false);
    EntropyEstimate quot = detail::estimate_from_accumulator(acc, opt.depth, true);
    total.one_inserted = inserted;
    quot.one_inserted = inserted;
    total_ests.push_back(std::move(total));
    quot_ests.push_back(std::move(quot));

    std::vector<Element> inside;
    for (const Element& e : entry.set)
      if (h.membership(e)) inside.push_back(e);
    ElementSet xh = detail::with_identity(ElementSet(std::move(inside)), nullptr);
    restr_ests.push_back(dyadic_sequence(phi, xh, opt.depth, opt.budget));
  }
  rep.total = detail::aggregate_evidence(labels, std::move(total_ests));
  rep.quotient = detail::aggregate_evidence(labels, std::move(quot_ests));
  rep.restricted = detail::aggregate_evidence(labels, std::move(restr_ests));

  rep.total_value = rep.total.value;
  rep.sum_value = rep.restricted.value + rep.quotient.value;

  // witness table from the last (largest) entry
  {
    const EntropyEstimate& t = rep.total.estimates.back();
    const EntropyEstimate& r = rep.restricted.estimates.back();
    const EntropyEstimate& q = rep.quotient.estimates.back();
    std::size_t rows = std::min({t.trace.size(), r.trace.size(), q.trace.size()});
    for (std::size_t i = 0; i < rows; ++i)
      rep.witness.push_back(WitnessRow{i + 1, t.trace[i], r.trace[i], q.trace[i]});
  }

  bool any_budget = rep.total.any_budget_hit || rep.restricted.any_budget_hit ||
                    rep.quotient.any_budget_hit;
  if (any_budget) rep.notes.push_back("budget exceeded in at least one entry");

  // 1. all three sides exact: compare integer growth bases
  if (rep.total.all_exact && rep.restricted.all_exact && rep.quotient.all_exact) {
    auto prod = checked_mul(rep.restricted.growth_base, rep.quotient.growth_base);
    rep.exact_identity = std::to_string(rep.restricted.growth_base) + " * " +
                         std::to_string(rep.quotient.growth_base) +
                         (prod && *prod == rep.total.growth_base ? " = " : " != ") +
                         std::to_string(rep.total.growth_base);
    if (prod && *prod == rep.total.growth_base) {
      rep.verdict = Verdict::AdditiveExact;
    } else {
      rep.verdict = Verdict::FailureWitness;
      rep.notes.push_back("exact growth bases disagree");
    }
    return rep;
  }

  // 2. growth witness: restricted side certified zero, quotient bounds
  //    strictly decreasing, totals growing geometrically through the window
  bool restricted_zero = rep.restricted.all_exact && rep.restricted.growth_base == 1;
  bool quotient_tame = true;
  for (const EntropyEstimate& est : rep.quotient.estimates) {
    bool zero = est.exact.kind == ExactKind::ZeroCertificate;
    if (!zero && !detail::strictly_decreasing_dyadics(est)) quotient_tame = false;
  }
  if (restricted_zero && quotient_tame) {
    for (std::size_t i = 0; i < rep.total.estimates.size(); ++i) {
      const std::vector<std::uint64_t>& tr = rep.total.estimates[i].trace;
      // ratio at n is |T_{n+1}| / |T_n|; need the whole window present
      if (tr.size() < static_cast<std::size_t>(opt.growth_hi) + 1) continue;
      std::vector<double> ratios;
      bool all_above = true;
      for (int n = opt.growth_lo; n <= opt.growth_hi; ++n) {
        double ratio = static_cast<double>(tr[n]) / static_cast<double>(tr[n - 1]);
        ratios.push_back(ratio);
        all_above = all_above && ratio >= opt.growth_threshold;
      }
      if (all_above) {
        rep.verdict = Verdict::FailureWitness;
        rep.growth_entry = rep.total.labels[i];
        rep.growth_ratios = std::move(ratios);
        rep.notes.push_back(
            "restricted and quotient sides are tame while the total side keeps "
            "growing geometrically");
        return rep;
      }
    }
  }

  // 3/4. float comparisons, only meaningful on complete runs
  if (!any_budget) {
    if (std::fabs(rep.sum_value - rep.total_value) <= opt.tolerance) {
      rep.verdict = Verdict::AdditiveWithinTolerance;
      return rep;
    }
    if (rep.sum_value <= rep.total_value + opt.tolerance) {
      rep.verdict = Verdict::InequalityOnly;
      return rep;
    }
  }
  rep.verdict = Verdict::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// h(phi) >= h(phi on N) + h(induced map), checked through the central-factor
// identity T_n(E*B) = T_n(E) * T_n(B) for a finite subgroup E of the
// phi-invariant central subgroup N

struct CenRow {
  std::uint64_t n = 0;
  std::uint64_t card_e = 0, card_b = 0, card_eb = 0;
  std::uint64_t cosets_b_mod_n = 0;   // cosets of N met by T_n(B)
  std::uint64_t classes_b_mod_te = 0; // classes of T_n(B) against T_n(E)
  bool te_subgroup = false;
  bool product_exact = false;  // T_n(EB) == T_n(E) * T_n(B)
  bool count_exact = false;    // |T_n(EB)| == classes * |T_n(E)|
  bool bound_ok = false;       // |T_n(E)| * cosets_b_mod_n <= |T_n(EB)|
};

struct CenReport {
  std::vector<CenRow> rows;
  bool holds = false;
  std::vector<std::string> notes;
};

inline CenReport check_cen_inequality(const Endo& phi, const SubgroupSpec& n_spec,
                                      const ElementSet& e_set, const ElementSet& b_set,
                                      int n_max, const ATOptions& opt) {
  const Group& g = phi.group();
  if (!is_subgroup(g, e_set))
    throw ConfigError("central factor E must be a finite subgroup");
  for (const Element& e : e_set)
    if (!n_spec.membership(e))
      throw ConfigError("E is not contained in subgroup '" + n_spec.name + "'");
  Rng rng(opt.seed);
  validate_central(g, n_spec, rng, opt.validation_pairs);
  detail::validate_invariant(phi, n_spec, rng, opt.validation_pairs);

  CenReport rep;
  ElementSet eb = product_set(g, e_set, b_set, opt.budget);
  bool all_ok = true;
  for (int n = 1; n <= n_max; ++n) {
    ElementSet te = trajectory(phi, e_set, n, opt.budget);
    ElementSet tb = trajectory(phi, b_set, n, opt.budget);
    ElementSet teb = trajectory(phi, eb, n, opt.budget);

    CenRow row;
    row.n = static_cast<std::uint64_t>(n);
    row.card_e = te.size();
    row.card_b = tb.size();
    row.card_eb = teb.size();
    row.te_subgroup = is_subgroup(g, te);
    row.product_exact = product_set(g, te, tb, opt.budget) == teb;
    row.classes_b_mod_te = ell_mod_set(g, tb, te).count;
    row.count_exact =
        checked_mul(row.classes_b_mod_te, row.card_e).value_or(0) == row.card_eb;
    row.cosets_b_mod_n = ell_mod(g, tb, n_spec).count;
    auto lower = checked_mul(row.card_e, row.cosets_b_mod_n);
    row.bound_ok = lower && *lower <= row.card_eb &&
                   row.cosets_b_mod_n <= row.classes_b_mod_te;
    all_ok = all_ok && row.te_subgroup && row.product_exact && row.count_exact &&
             row.bound_ok;
    rep.rows.push_back(row);
  }
  rep.holds = all_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// h(phi) <= h(phi on G') + h(induced map) for torsion metabelian G, checked
// through the closure decomposition <T> = T*E and the coset sandwich

struct MettorRow {
  int k = 0;
  std::uint64_t n = 0;  // 2^k
  std::uint64_t card_d = 0;       // |T_n(phi, D)|
  std::uint64_t classes_mid = 0;  // classes of T_n(D) against T_n(E)
  std::uint64_t card_e = 0;       // |T_n(phi, E)|
  bool fallback = false;          // T_n(E) was not a subgroup
  bool sandwich_ok = false;       // card_d <= classes_mid * card_e
  double mid_over_n = 0.0;        // log(classes_mid) / n
};

struct MettorReport {
  std::uint64_t card_t = 0, closure_card = 0, e_card = 0, s_card = 0;
  bool closure_decomposes = false;  // <T> == T * E
  std::uint64_t ell_t_derived = 0, ell_t_s = 0;
  bool ell_match = false;  // cosets of G' met by T == classes of T against S
  std::vector<MettorRow> sandwich;
  bool holds = false;
  std::vector<std::string> notes;
};

inline MettorReport check_mettor_chain(const Endo& phi, const ElementSet& d_set,
                                       int m, int depth, const ATOptions& opt) {
  const Group& g = phi.group();
  if (!is_subgroup(g, d_set))
    throw ConfigError("mettor chain starts from a finite subgroup D");
  if (m > depth) throw ConfigError("mettor chain needs m <= depth");

  MettorReport rep;
  int big_m = 1 << m;
  CfsubResult dec = cfsub_decompose(phi, d_set, big_m, opt.budget);
  rep.card_t = dec.trajectory.size();
  rep.closure_card = dec.closure.size();
  rep.e_card = dec.e_n.size();
  rep.closure_decomposes = dec.holds;

  ElementSet s = trajectory(phi, dec.e_n, big_m, opt.budget);
  rep.s_card = s.size();
  rep.ell_t_derived = ell_mod(g, dec.trajectory, derived_spec(g)).count;
  CosetCount vs = ell_mod_set(g, dec.trajectory, s);
  rep.ell_t_s = vs.count;
  rep.ell_match = rep.ell_t_derived == rep.ell_t_s;
  if (vs.fallback_used)
    rep.notes.push_back("T_{2^m}(phi, E) is not a subgroup; classes counted by "
                        "pairwise merging");

  bool all_ok = true;
  TrajectoryAccumulator acc_d(phi, d_set, opt.budget);
  TrajectoryAccumulator acc_e(phi, dec.e_n, opt.budget);
  for (int k = m; k <= depth; ++k) {
    std::uint64_t n = std::uint64_t{1} << k;
    while (acc_d.n() < n && acc_d.step()) {
    }
    while (acc_e.n() < n && acc_e.step()) {
    }
    if (acc_d.budget_hit() || acc_e.budget_hit())
      throw BudgetExceeded(opt.budget, opt.budget + 1);
    ElementSet td = acc_d.snapshot();
    ElementSet te = acc_e.snapshot();
    MettorRow row;
    row.k = k;
    row.n = n;
    row.card_d = td.size();
    row.card_e = te.size();
    CosetCount mid = ell_mod_set(g, td, te);
    row.classes_mid = mid.count;
    row.fallback = mid.fallback_used;
    auto bound = checked_mul(row.classes_mid, row.card_e);
    row.sandwich_ok = !bound || td.size() <= *bound;
    row.mid_over_n =
        std::log(static_cast<double>(mid.count)) / static_cast<double>(n);
    all_ok = all_ok && row.sandwich_ok;
    rep.sandwich.push_back(row);
  }
  rep.holds = rep.closure_decomposes && rep.ell_match && all_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// zero-entropy quotient reduction: when the image of T_m(phi, E) in G/H
// stabilizes, a finite subgroup E2 of H absorbs all later growth:
// T_{m+k}(phi, E) is contained in T_m(phi, E) * T_k(phi, E2)

struct ZeroReductionReport {
  int m = -1;
  std::uint64_t f_card = 0, e2_card = 0;
  bool e2_in_h = false;
  std::vector<bool> inclusion_ok;  // k = 1..depth
  std::vector<std::uint64_t> quotient_trace;
  EntropyEstimate est_e, est_e2;
  bool holds = false;
  std::vector<std::string> notes;
};

inline ZeroReductionReport check_zero_reduction(const Endo& phi,
                                                const SubgroupSpec& h,
                                                const ElementSet& e_set, int m_max,
                                                int depth, const ATOptions& opt) {
  const Group& g = phi.group();
  if (!is_subgroup(g, e_set))
    throw ConfigError("zero reduction starts from a finite subgroup E");
  if (!h.has_key())
    throw ConfigError("zero reduction requires a coset key for subgroup '" +
                      h.name + "'");
  Rng rng(opt.seed);
  validate_normal(g, h, rng, opt.validation_pairs);
  detail::validate_invariant(phi, h, rng, opt.validation_pairs);

  ZeroReductionReport rep;
  TrajectoryAccumulator acc(phi, e_set, opt.budget, &h);
  while (acc.quotient_stabilized_at() < 0 &&
         acc.n() <= static_cast<std::uint64_t>(m_max) && acc.step()) {
  }
  if (acc.budget_hit()) throw BudgetExceeded(opt.budget, opt.budget + 1);
  if (acc.quotient_stabilized_at() < 0 || acc.quotient_stabilized_at() > m_max)
    throw NoCertificate("image of T_m in G/" + h.name +
                        " does not stabilize up to m_max=" + std::to_string(m_max));
  rep.m = acc.quotient_stabilized_at();
  rep.quotient_trace = acc.coset_trace();

  ElementSet tm = trajectory(phi, e_set, rep.m, opt.budget);
  ElementSet tm1 = trajectory(phi, e_set, rep.m + 1, opt.budget);

  // pick, per element of T_{m+1}, a mate in T_m from the same H-coset; the
  // differences lie in H and generate the absorbing subgroup
  std::vector<Element> diffs{g.identity()};
  for (const Element& x : tm1) {
    Element kx = h.coset_key(x);
    bool found = false;
    for (const Element& u : tm)
      if (h.coset_key(u) == kx) {
        Element f = g.mul(g.inv(u), x);
        if (!h.membership(f))
          throw Error("coset key disagrees with membership for subgroup '" +
                      h.name + "'");
        diffs.push_back(std::move(f));
        found = true;
        break;
      }
    if (!found)
      throw Error("stabilized quotient trajectory lost a coset; key bug");
  }
  ElementSet f_set(std::move(diffs));
  rep.f_card = f_set.size();

  ElementSet e2 = subgroup_closure(g, f_set, opt.budget);
  rep.e2_card = e2.size();
  rep.e2_in_h = true;
  for (const Element& e : e2)
    if (!h.membership(e)) rep.e2_in_h = false;

  bool all_ok = rep.e2_in_h;
  for (int k = 1; k <= depth; ++k) {
    ElementSet tmk = trajectory(phi, e_set, rep.m + k, opt.budget);
    ElementSet tk2 = trajectory(phi, e2, k, opt.budget);
    bool ok = tmk.subset_of(product_set(g, tm, tk2, opt.budget));
    rep.inclusion_ok.push_back(ok);
    all_ok = all_ok && ok;
  }
  rep.est_e = dyadic_sequence(phi, e_set, depth, opt.budget);
  rep.est_e2 = dyadic_sequence(phi, e2, depth, opt.budget);
  rep.holds = all_ok;
  return rep;
}

}  // namespace entropylab

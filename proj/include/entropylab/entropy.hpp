#pragma once

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "entropylab/trajectory.hpp"

namespace entropylab {

// ---------------------------------------------------------------------------
// Exact outcomes.  A zero certificate is a witnessed stabilization
// T_{m+1} == T_m (with 1 in X the trajectory is then constant forever, so
// H(phi, X) = 0).  An exact-linear fit is |T_n| == c * r^n verified at every
// computed n with integer r >= 2 and c >= 1, giving H(phi, X) = log r.

enum class ExactKind { None, ZeroCertificate, ExactLinear };

struct Exactness {
  ExactKind kind = ExactKind::None;
  int certificate_m = -1;       // ZeroCertificate: smallest m with T_{m+1}==T_m
  std::uint64_t growth_base = 1;   // r (1 for a zero certificate)
  std::uint64_t growth_coeff = 1;  // c

  bool is_exact() const { return kind != ExactKind::None; }
  double value() const {
    return kind == ExactKind::ExactLinear
               ? std::log(static_cast<double>(growth_base))
               : 0.0;
  }
};

// checks |trace[i]| == c * r^(i+1) for every i (trace is 1-indexed by n)
inline std::optional<Exactness> detect_exact_linear(
    const std::vector<std::uint64_t>& trace) {
  if (trace.size() < 2) return std::nullopt;
  std::uint64_t t1 = trace[0], t2 = trace[1];
  if (t1 == 0 || t2 % t1 != 0) return std::nullopt;
  std::uint64_t r = t2 / t1;
  if (r < 2) return std::nullopt;
  if (t1 % r != 0) return std::nullopt;
  std::uint64_t c = t1 / r;
  if (c < 1) return std::nullopt;
  std::uint64_t pred = t1;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    auto next = checked_mul(pred, r);
    if (!next || *next != trace[i]) return std::nullopt;
    pred = *next;
  }
  Exactness e;
  e.kind = ExactKind::ExactLinear;
  e.growth_base = r;
  e.growth_coeff = c;
  return e;
}

// ---------------------------------------------------------------------------

struct DyadicPoint {
  int k = 0;
  std::uint64_t n = 1;  // 2^k
  std::uint64_t cardinality = 1;
  double d = 0.0;  // log(cardinality) / n, an upper bound for H(phi, X)
};

struct EntropyEstimate {
  std::vector<std::uint64_t> trace;  // |T_1| .. |T_N| (cosets when quotient)
  std::vector<DyadicPoint> dyadic;
  double upper_bound = 0.0;  // last dyadic d; 0 when a certificate fired
  Exactness exact;
  int depth_reached = -1;
  bool budget_hit = false;
  bool one_inserted = false;
  bool quotient = false;

  double value() const { return exact.is_exact() ? exact.value() : upper_bound; }
};

namespace detail {

inline ElementSet with_identity(ElementSet x, bool* inserted) {
  Element one;
  if (!x.contains(one)) {
    x.insert(one);
    if (inserted) *inserted = true;
  }
  return x;
}

// The dyadic points must obey |T_2n| <= |T_n|^2 (T_2n = T_n * phi^n(T_n));
// a violation means the accumulator itself is broken, so fail loudly.
inline void assert_submultiplicative(const std::vector<DyadicPoint>& pts) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    auto sq = checked_mul(pts[i - 1].cardinality, pts[i - 1].cardinality);
    if (sq && pts[i].cardinality > *sq)
      throw Error("dyadic trace is not submultiplicative; trajectory engine bug");
  }
}

inline EntropyEstimate estimate_from_accumulator(TrajectoryAccumulator& acc,
                                                 int depth, bool quotient) {
  std::uint64_t target = std::max<std::uint64_t>(std::uint64_t{1} << depth, 3);
  while (acc.n() < target && acc.step()) {
  }

  EntropyEstimate est;
  est.quotient = quotient;
  est.budget_hit = acc.budget_hit();
  est.trace = quotient ? acc.coset_trace() : acc.card_trace();
  if (est.trace.empty()) return est;  // budget hit before T_1

  for (int k = 0; k <= depth; ++k) {
    std::uint64_t n = std::uint64_t{1} << k;
    if (n > est.trace.size()) break;
    DyadicPoint p;
    p.k = k;
    p.n = n;
    p.cardinality = est.trace[n - 1];
    p.d = std::log(static_cast<double>(p.cardinality)) / static_cast<double>(n);
    est.dyadic.push_back(p);
    est.depth_reached = k;
  }
  assert_submultiplicative(est.dyadic);
  if (!est.dyadic.empty()) est.upper_bound = est.dyadic.back().d;

  int m = quotient ? acc.quotient_stabilized_at() : acc.stabilized_at();
  if (m >= 0) {
    est.exact.kind = ExactKind::ZeroCertificate;
    est.exact.certificate_m = m;
    est.upper_bound = 0.0;
  } else if (!est.budget_hit) {
    if (auto lin = detect_exact_linear(est.trace)) est.exact = *lin;
  }
  return est;
}

}  // namespace detail

// dyadic upper bounds d_k = log|T_{2^k}(phi, X u {1})| / 2^k, k = 0..depth;
// the sequence is non-increasing in k and converges to H(phi, X u {1})
inline EntropyEstimate dyadic_sequence(const Endo& phi, const ElementSet& x,
                                       int depth, std::size_t budget) {
  bool inserted = false;
  ElementSet x1 = detail::with_identity(x, &inserted);
  TrajectoryAccumulator acc(phi, x1, budget);
  EntropyEstimate est = detail::estimate_from_accumulator(acc, depth, false);
  est.one_inserted = inserted;
  return est;
}

// same bounds for the induced map on G/H, counted upstairs through coset
// keys (the quotient group is never materialized); requires a keyed spec
// unless the trajectories stay tiny
inline EntropyEstimate dyadic_sequence_mod(const Endo& phi, const ElementSet& x,
                                           const SubgroupSpec& h, int depth,
                                           std::size_t budget) {
  bool inserted = false;
  ElementSet x1 = detail::with_identity(x, &inserted);
  if (h.has_key()) {
    TrajectoryAccumulator acc(phi, x1, budget, &h);
    EntropyEstimate est = detail::estimate_from_accumulator(acc, depth, true);
    est.one_inserted = inserted;
    return est;
  }

  // keyless fallback: pairwise coset counting per step, only viable for toys
  constexpr std::uint64_t kFallbackCap = 4096;
  const Group& g = phi.group();
  TrajectoryAccumulator acc(phi, x1, budget);
  std::uint64_t target = std::max<std::uint64_t>(std::uint64_t{1} << depth, 3);
  std::vector<std::uint64_t> cosets;
  int quotient_stable_at = -1;
  while (!acc.budget_hit()) {
    if (acc.cardinality() > kFallbackCap)
      throw Error("subgroup '" + h.name +
                  "' has no coset key and the trajectory outgrew the pairwise "
                  "counter");
    cosets.push_back(ell_mod(g, acc.snapshot(), h).count);
    std::size_t s = cosets.size();
    if (s >= 2 && quotient_stable_at < 0 && cosets[s - 1] == cosets[s - 2])
      quotient_stable_at = static_cast<int>(s) - 1;
    if (acc.n() >= target || !acc.step()) break;
  }

  EntropyEstimate est;
  est.quotient = true;
  est.one_inserted = inserted;
  est.budget_hit = acc.budget_hit();
  est.trace = std::move(cosets);
  for (int k = 0; k <= depth; ++k) {
    std::uint64_t n = std::uint64_t{1} << k;
    if (n > est.trace.size()) break;
    DyadicPoint p;
    p.k = k;
    p.n = n;
    p.cardinality = est.trace[n - 1];
    p.d = std::log(static_cast<double>(p.cardinality)) / static_cast<double>(n);
    est.dyadic.push_back(p);
    est.depth_reached = k;
  }
  detail::assert_submultiplicative(est.dyadic);
  if (!est.dyadic.empty()) est.upper_bound = est.dyadic.back().d;
  if (quotient_stable_at >= 0) {
    est.exact.kind = ExactKind::ZeroCertificate;
    est.exact.certificate_m = quotient_stable_at;
    est.upper_bound = 0.0;
  } else if (!est.budget_hit) {
    if (auto lin = detect_exact_linear(est.trace)) est.exact = *lin;
  }
  return est;
}

// smallest m <= m_max with T_{m+1}(phi, X u {1}) == T_m(phi, X u {1});
// throws NoCertificate when none exists within the horizon
inline int zero_entropy_certificate(const Endo& phi, const ElementSet& x,
                                    int m_max, std::size_t budget) {
  ElementSet x1 = detail::with_identity(x, nullptr);
  TrajectoryAccumulator acc(phi, x1, budget);
  while (acc.stabilized_at() < 0 &&
         acc.n() <= static_cast<std::uint64_t>(m_max) && acc.step()) {
  }
  if (acc.budget_hit()) throw BudgetExceeded(budget, budget + 1);
  if (acc.stabilized_at() < 0 || acc.stabilized_at() > m_max)
    throw NoCertificate("no stabilization up to m_max=" + std::to_string(m_max));
  return acc.stabilized_at();
}

// ---------------------------------------------------------------------------
// h(phi) evidence over a finite exhaustion chain: per-entry estimates plus
// the aggregated picture.  The aggregate is sup over the chain, which
// witnesses a lower bound for h and equals it when the chain is exhausting
// and every entry is exact.

struct ExhaustionEntry {
  std::string label;
  ElementSet set;
};

struct HEvidence {
  std::vector<std::string> labels;
  std::vector<EntropyEstimate> estimates;
  bool all_exact = false;
  bool any_budget_hit = false;
  std::uint64_t growth_base = 1;  // max r over entries when all exact
  double value = 0.0;             // sup of per-entry values
};

inline HEvidence h_evidence(const Endo& phi,
                            const std::vector<ExhaustionEntry>& entries,
                            int depth, std::size_t budget) {
  if (entries.empty()) throw ConfigError("empty exhaustion chain");
  HEvidence ev;
  std::vector<std::future<EntropyEstimate>> futures;
  futures.reserve(entries.size());
  for (const ExhaustionEntry& e : entries)
    futures.push_back(std::async(std::launch::async, [&phi, &e, depth, budget] {
      return dyadic_sequence(phi, e.set, depth, budget);
    }));

  ev.all_exact = true;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ev.labels.push_back(entries[i].label);
    ev.estimates.push_back(futures[i].get());
    const EntropyEstimate& est = ev.estimates.back();
    ev.all_exact = ev.all_exact && est.exact.is_exact();
    ev.any_budget_hit = ev.any_budget_hit || est.budget_hit;
    ev.value = std::max(ev.value, est.value());
    if (est.exact.is_exact())
      ev.growth_base = std::max(ev.growth_base, est.exact.growth_base);
  }
  if (!ev.all_exact) ev.growth_base = 1;
  return ev;
}

}  // namespace entropylab

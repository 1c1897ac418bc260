#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "entropylab/morphisms.hpp"

namespace entropylab {

// ---------------------------------------------------------------------------
// n-th trajectory T_n(phi, X) = X * phi(X) * ... * phi^{n-1}(X), computed
// step by step via T_{n+1} = T_n * phi^n(X) with the factor phi^n(X) cached.
//
// The accumulator makes no assumption about 1 being in X, so each step builds
// the next product set from scratch; when the caller does keep 1 in X the
// sets grow monotonically and stabilization detection below becomes the
// zero-entropy certificate.

namespace detail {

// dedup sets over a backing element vector store 4-byte indices instead of a
// second copy of every element; lookups by element use C++20 heterogeneous
// find
struct IndexedHash {
  using is_transparent = void;
  const std::vector<Element>* v = nullptr;
  std::size_t operator()(std::uint32_t i) const { return ElementHash{}((*v)[i]); }
  std::size_t operator()(const Element& e) const { return ElementHash{}(e); }
};

struct IndexedEq {
  using is_transparent = void;
  const std::vector<Element>* v = nullptr;
  bool operator()(std::uint32_t a, std::uint32_t b) const { return (*v)[a] == (*v)[b]; }
  bool operator()(std::uint32_t a, const Element& e) const { return (*v)[a] == e; }
  bool operator()(const Element& e, std::uint32_t a) const { return (*v)[a] == e; }
};

using IndexedSet = std::unordered_set<std::uint32_t, IndexedHash, IndexedEq>;

inline IndexedSet make_indexed_set(const std::vector<Element>* v) {
  return IndexedSet(0, IndexedHash{v}, IndexedEq{v});
}

}  // namespace detail

class TrajectoryAccumulator {
 public:
  TrajectoryAccumulator(Endo phi, const ElementSet& x, std::size_t budget,
                        const SubgroupSpec* keyed_spec = nullptr)
      : phi_(std::move(phi)),
        budget_(budget),
        lookup_(detail::make_indexed_set(&elems_)) {
    const Group& g = phi_.group();
    if (x.empty()) throw Error("trajectory of an empty set");
    for (const Element& e : x) g.validate(e);
    factor_ = x;
    elems_.assign(x.begin(), x.end());
    for (std::uint32_t i = 0; i < elems_.size(); ++i) lookup_.insert(i);
    if (elems_.size() > budget_) {
      budget_hit_ = true;
      return;
    }
    card_trace_.push_back(elems_.size());
    if (keyed_spec && keyed_spec->has_key()) {
      key_of_ = keyed_spec->coset_key;
      for (const Element& e : elems_) keys_.insert(key_of_(e));
      coset_trace_.push_back(keys_.size());
    }
  }

  // extend T_n to T_{n+1}; returns false (once) when the budget is exceeded
  bool step() {
    if (budget_hit_) return false;
    if (stabilized_at_ >= 0) {
      // T_{n+1} = X*phi(T_n) is a function of T_n alone, so once two
      // consecutive trajectories coincide the sequence is constant
      card_trace_.push_back(card_trace_.back());
      if (key_of_) coset_trace_.push_back(coset_trace_.back());
      return true;
    }

    ElementSet next_factor = phi_.apply_set(factor_);
    const Group& g = phi_.group();
    std::vector<Element> next;
    detail::IndexedSet next_lookup = detail::make_indexed_set(&next);
    next_lookup.reserve(elems_.size() * 2);
    for (const Element& t : elems_)
      for (const Element& s : next_factor) {
        Element p = g.mul(t, s);
        if (next_lookup.find(p) == next_lookup.end()) {
          next.push_back(std::move(p));
          if (next.size() > budget_) {
            budget_hit_ = true;
            return false;
          }
          next_lookup.insert(static_cast<std::uint32_t>(next.size() - 1));
        }
      }

    bool same = next.size() == elems_.size();
    if (same)
      for (const Element& e : next)
        if (lookup_.find(e) == lookup_.end()) {
          same = false;
          break;
        }
    if (same && stabilized_at_ < 0) stabilized_at_ = static_cast<int>(n());

    factor_ = std::move(next_factor);
    elems_ = std::move(next);
    lookup_ = std::move(next_lookup);
    // the moved-from set kept a pointer to the old vector; rebuild over elems_
    rebind_lookup();
    card_trace_.push_back(elems_.size());

    if (key_of_) {
      ElementHashSet next_keys;
      for (const Element& e : elems_) next_keys.insert(key_of_(e));
      bool qsame = next_keys.size() == keys_.size();
      if (qsame)
        for (const Element& k : next_keys)
          if (!keys_.contains(k)) {
            qsame = false;
            break;
          }
      if (qsame && quotient_stabilized_at_ < 0)
        quotient_stabilized_at_ = static_cast<int>(n()) - 1;
      keys_ = std::move(next_keys);
      coset_trace_.push_back(keys_.size());
    }
    return true;
  }

  // largest n with T_n fully computed
  std::uint64_t n() const { return card_trace_.size(); }
  std::uint64_t cardinality() const {
    return card_trace_.empty() ? 0 : card_trace_.back();
  }
  const std::vector<std::uint64_t>& card_trace() const { return card_trace_; }
  const std::vector<std::uint64_t>& coset_trace() const { return coset_trace_; }
  bool budget_hit() const { return budget_hit_; }
  // smallest m with T_{m+1} == T_m (-1 while none seen)
  int stabilized_at() const { return stabilized_at_; }
  // smallest m with pi(T_{m+1}) == pi(T_m) (-1 while none seen)
  int quotient_stabilized_at() const { return quotient_stabilized_at_; }

  const std::vector<Element>& raw() const { return elems_; }
  ElementSet snapshot() const {
    std::vector<Element> v = elems_;
    return ElementSet(std::move(v));
  }
  const Group& group() const { return phi_.group(); }

 private:
  void rebind_lookup() {
    lookup_ = detail::make_indexed_set(&elems_);
    lookup_.reserve(elems_.size());
    for (std::uint32_t i = 0; i < elems_.size(); ++i) lookup_.insert(i);
  }

  Endo phi_;
  std::size_t budget_;
  ElementSet factor_;  // phi^{n-1}(X)
  std::vector<Element> elems_;
  detail::IndexedSet lookup_;
  ElementHashSet keys_;
  std::function<Element(const Element&)> key_of_;
  std::vector<std::uint64_t> card_trace_, coset_trace_;
  bool budget_hit_ = false;
  int stabilized_at_ = -1;
  int quotient_stabilized_at_ = -1;
};

inline ElementSet trajectory(const Endo& phi, const ElementSet& x, int n,
                             std::size_t budget = kDefaultBudget) {
  if (n < 1) throw Error("trajectory index must be positive");
  TrajectoryAccumulator acc(phi, x, budget);
  while (acc.n() < static_cast<std::uint64_t>(n) && acc.step()) {
  }
  if (acc.budget_hit()) throw BudgetExceeded(budget, budget + 1);
  return acc.snapshot();
}

// back trajectory T#_n = phi^{n-1}(X) * ... * phi(X) * X
inline ElementSet back_trajectory(const Endo& phi, const ElementSet& x, int n,
                                  std::size_t budget = kDefaultBudget) {
  if (n < 1) throw Error("trajectory index must be positive");
  const Group& g = phi.group();
  for (const Element& e : x) g.validate(e);
  ElementSet factor = x;
  std::vector<Element> acc(x.begin(), x.end());
  for (int k = 1; k < n; ++k) {
    factor = phi.apply_set(factor);  // phi^k(X)
    std::vector<Element> next;
    ElementHashSet seen;
    for (const Element& f : factor)
      for (const Element& b : acc) {
        Element p = g.mul(f, b);
        if (seen.insert(p).second) {
          next.push_back(std::move(p));
          if (next.size() > budget) throw BudgetExceeded(budget, next.size());
        }
      }
    acc = std::move(next);
  }
  return ElementSet(std::move(acc));
}

// ---------------------------------------------------------------------------
// log-cardinalities

inline LogCard ell(const ElementSet& s) {
  return LogCard{s.size(), std::log(static_cast<double>(s.size()))};
}

struct CosetCount {
  std::uint64_t count = 0;
  double log_value = 0.0;
  bool fallback_used = false;  // quadratic pairwise merge instead of keys
};

namespace detail {

// connected components of x ~ y iff x^-1 y lies in the tested set; the
// predicate is symmetric for subgroups, and callers that pass a raw
// (possibly non-subgroup) set get the transitive closure of the symmetrized
// relation
template <typename Related>
std::uint64_t merge_count(std::size_t n, Related related) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t ri = find(i), rj = find(j);
      if (ri != rj && related(i, j)) parent[ri] = rj;
    }
  std::uint64_t classes = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == i) ++classes;
  return classes;
}

}  // namespace detail

// number of left cosets of H met by S: ell(S, H) = log of that count
inline CosetCount ell_mod(const Group& g, const ElementSet& s, const SubgroupSpec& h) {
  CosetCount out;
  if (h.has_key()) {
    ElementHashSet keys;
    for (const Element& e : s) keys.insert(h.coset_key(e));
    out.count = keys.size();
  } else {
    out.fallback_used = true;
    const auto& v = s.elements();
    out.count = detail::merge_count(v.size(), [&](std::size_t i, std::size_t j) {
      return h.membership(g.mul(g.inv(v[i]), v[j]));
    });
  }
  out.log_value = std::log(static_cast<double>(out.count));
  return out;
}

// Same count against an explicitly enumerated set B.  When B is a subgroup
// this is the left coset count (computed via smallest-element coset keys);
// otherwise it is the class count of the merged relation x^-1 y in B u B^-1.
inline CosetCount ell_mod_set(const Group& g, const ElementSet& s, const ElementSet& b) {
  if (b.empty()) throw Error("coset count against an empty set");
  CosetCount out;
  if (is_subgroup(g, b)) {
    ElementHashSet keys;
    for (const Element& e : s) {
      Element best = g.mul(e, *b.begin());
      for (const Element& x : b) best = std::min(best, g.mul(e, x));
      keys.insert(std::move(best));
    }
    out.count = keys.size();
  } else {
    out.fallback_used = true;
    const auto& v = s.elements();
    out.count = detail::merge_count(v.size(), [&](std::size_t i, std::size_t j) {
      Element d = g.mul(g.inv(v[i]), v[j]);
      return b.contains(d) || b.contains(g.inv(d));
    });
  }
  out.log_value = std::log(static_cast<double>(out.count));
  return out;
}

// ---------------------------------------------------------------------------
// closure decomposition <T_n(phi,F)> = T_n(phi,F) * E_n with
// E_n = <T_n(phi,F)> n G'

struct CfsubResult {
  ElementSet trajectory;  // T_n(phi, F)
  ElementSet closure;     // <T_n(phi, F)>
  ElementSet e_n;         // closure n G'
  bool holds = false;     // closure == trajectory * e_n, checked exactly
};

inline CfsubResult cfsub_decompose(const Endo& phi, const ElementSet& f, int n,
                                   std::size_t budget = kDefaultBudget) {
  const Group& g = phi.group();
  CfsubResult r;
  r.trajectory = trajectory(phi, f, n, budget);
  r.closure = subgroup_closure(g, r.trajectory, budget);
  std::vector<Element> en;
  for (const Element& e : r.closure)
    if (g.derived_membership(e)) en.push_back(e);
  r.e_n = ElementSet(std::move(en));

  ElementHashSet product;
  for (const Element& t : r.trajectory)
    for (const Element& e : r.e_n) {
      product.insert(g.mul(t, e));
      if (product.size() > budget) throw BudgetExceeded(budget, product.size());
    }
  r.holds = ElementSet::from_hash_set(product) == r.closure;
  return r;
}

// product set X*Y, used by the harness checks
inline ElementSet product_set(const Group& g, const ElementSet& x, const ElementSet& y,
                              std::size_t budget = kDefaultBudget) {
  ElementHashSet out;
  for (const Element& a : x)
    for (const Element& b : y) {
      out.insert(g.mul(a, b));
      if (out.size() > budget) throw BudgetExceeded(budget, out.size());
    }
  return ElementSet::from_hash_set(out);
}

}  // namespace entropylab

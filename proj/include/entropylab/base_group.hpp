#pragma once

#include <cassert>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "entropylab/core.hpp"

namespace entropylab {

// A finite group given by its full multiplication table, used as the base of
// restricted power families.  Element 0 is always the identity.  The derived
// subgroup, the center and canonical coset representatives modulo both are
// precomputed by brute force at construction, so the per-coordinate oracles
// of a restricted power are plain table lookups.
class BaseGroup {
 public:
  // Closure of a permutation generating set.  Element labels are cycle
  // strings of the underlying permutations.
  static BaseGroup from_permutations(const std::vector<Element>& generators,
                                     std::size_t budget = kDefaultBudget);

  // Heisenberg group over F_p: triples (a,b,c) with
  // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').  Labels are "a,b,c".
  static BaseGroup heisenberg(int p);

  // Cyclic group of order n, labels "0".."n-1".
  static BaseGroup cyclic(int n);

  int order() const { return order_; }
  int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a) * order_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int identity() const { return 0; }

  bool in_derived(int a) const { return in_derived_[a]; }
  bool in_center(int a) const { return in_center_[a]; }
  // smallest element id in the coset a*G' (resp. a*Z); both subgroups are
  // normal so this keys the quotient exactly
  int derived_coset_rep(int a) const { return derived_rep_[a]; }
  int center_coset_rep(int a) const { return center_rep_[a]; }

  const std::vector<int>& derived_elements() const { return derived_list_; }
  bool abelian() const { return abelian_; }
  // lcm of element orders; the unit check for coordinatewise powers
  int exponent() const { return exponent_; }

  const std::string& label(int a) const { return labels_[a]; }
  // -1 when no element carries the label
  int find_label(const std::string& s) const {
    auto it = label_index_.find(s);
    return it == label_index_.end() ? -1 : it->second;
  }
  const std::string& name() const { return name_; }

 private:
  BaseGroup() = default;
  void finish();  // derives inv_, subgroup data, flags from mul_

  int order_ = 1;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<bool> in_derived_, in_center_;
  std::vector<int> derived_rep_, center_rep_, derived_list_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> label_index_;
  bool abelian_ = true;
  int exponent_ = 1;
  std::string name_;
};

namespace detail {

inline std::string cycle_label(const Element& p) {
  if (p.coords.empty()) return "1";
  std::string out;
  for (const auto& cyc : perm::cycles(p)) {
    out += '(';
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(cyc[i]);
    }
    out += ')';
  }
  return out;
}

}  // namespace detail

inline BaseGroup BaseGroup::from_permutations(const std::vector<Element>& generators,
                                              std::size_t budget) {
  for (const Element& g : generators)
    if (!perm::valid(g) || g.shift != 0)
      throw MalformedElement("base group generator is not a permutation");

  // plain orbit closure under right multiplication by the generators
  std::vector<Element> elems{Element{}};
  std::unordered_map<Element, int, ElementHash> index{{Element{}, 0}};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const Element& g : generators) {
      Element next = perm::mul(elems[i], g);
      if (index.emplace(next, static_cast<int>(elems.size())).second) {
        elems.push_back(std::move(next));
        if (elems.size() > budget) throw BudgetExceeded(budget, elems.size());
      }
    }
  }

  BaseGroup b;
  b.order_ = static_cast<int>(elems.size());
  b.name_ = "perm_table(" + std::to_string(b.order_) + ")";
  b.mul_.assign(static_cast<std::size_t>(b.order_) * b.order_, 0);
  for (int i = 0; i < b.order_; ++i)
    for (int j = 0; j < b.order_; ++j)
      b.mul_[static_cast<std::size_t>(i) * b.order_ + j] =
          index.at(perm::mul(elems[i], elems[j]));
  b.labels_.reserve(elems.size());
  for (const Element& e : elems) b.labels_.push_back(detail::cycle_label(e));
  b.finish();
  return b;
}

inline BaseGroup BaseGroup::heisenberg(int p) {
  if (p < 2) throw ConfigError("heisenberg base needs p >= 2");
  BaseGroup b;
  b.order_ = p * p * p;
  b.name_ = "heisenberg(" + std::to_string(p) + ")";
  auto id = [p](int a, int bb, int c) { return (a * p + bb) * p + c; };
  b.mul_.assign(static_cast<std::size_t>(b.order_) * b.order_, 0);
  for (int a = 0; a < p; ++a)
    for (int bb = 0; bb < p; ++bb)
      for (int c = 0; c < p; ++c) {
        b.labels_.push_back(std::to_string(a) + "," + std::to_string(bb) +
                            "," + std::to_string(c));
        for (int a2 = 0; a2 < p; ++a2)
          for (int b2 = 0; b2 < p; ++b2)
            for (int c2 = 0; c2 < p; ++c2)
              b.mul_[static_cast<std::size_t>(id(a, bb, c)) * b.order_ +
                     id(a2, b2, c2)] =
                  id((a + a2) % p, (bb + b2) % p, (c + c2 + a * b2) % p);
      }
  b.finish();
  return b;
}

inline BaseGroup BaseGroup::cyclic(int n) {
  if (n < 1) throw ConfigError("cyclic base needs n >= 1");
  BaseGroup b;
  b.order_ = n;
  b.name_ = "cyclic(" + std::to_string(n) + ")";
  b.mul_.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    b.labels_.push_back(std::to_string(i));
    for (int j = 0; j < n; ++j)
      b.mul_[static_cast<std::size_t>(i) * n + j] = (i + j) % n;
  }
  b.finish();
  return b;
}

inline void BaseGroup::finish() {
  const int n = order_;
  assert(!mul_.empty());
  for (int i = 0; i < n; ++i) {
    if (mul(0, i) != i || mul(i, 0) != i)
      throw Error("base group: element 0 is not the identity");
  }

  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul(a, b) == 0) inv_[a] = b;
  for (int a = 0; a < n; ++a)
    if (inv_[a] < 0) throw Error("base group: missing inverse");

  abelian_ = true;
  for (int a = 0; a < n && abelian_; ++a)
    for (int b = 0; b < n; ++b)
      if (mul(a, b) != mul(b, a)) {
        abelian_ = false;
        break;
      }

  // commutator closure: all [a,b], then close under multiplication
  std::vector<bool> in(n, false);
  std::vector<int> work;
  in[0] = true;
  work.push_back(0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int c = mul(mul(a, b), mul(inv_[a], inv_[b]));
      if (!in[c]) {
        in[c] = true;
        work.push_back(c);
      }
    }
  for (std::size_t i = 0; i < work.size(); ++i)
    for (std::size_t j = 0; j < work.size(); ++j) {
      int c = mul(work[i], work[j]);
      if (!in[c]) {
        in[c] = true;
        work.push_back(c);
      }
    }
  in_derived_.assign(in.begin(), in.end());
  derived_list_.clear();
  for (int a = 0; a < n; ++a)
    if (in_derived_[a]) derived_list_.push_back(a);

  in_center_.assign(n, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul(a, b) != mul(b, a)) in_center_[a] = false;

  auto coset_reps = [this, n](const std::vector<bool>& member) {
    std::vector<int> rep(n);
    for (int a = 0; a < n; ++a) {
      int best = a;
      for (int h = 0; h < n; ++h)
        if (member[h]) best = std::min(best, mul(a, h));
      rep[a] = best;
    }
    return rep;
  };
  derived_rep_ = coset_reps(in_derived_);
  center_rep_ = coset_reps(in_center_);

  exponent_ = 1;
  for (int a = 0; a < n; ++a) {
    int ord = 1, x = a;
    while (x != 0) {
      x = mul(x, a);
      ++ord;
    }
    exponent_ = static_cast<int>(std::lcm(exponent_, ord));
  }

  label_index_.clear();
  for (int a = 0; a < n; ++a) label_index_.emplace(labels_[a], a);
}

}  // namespace entropylab

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "entropylab/base_group.hpp"
#include "entropylab/core.hpp"

namespace entropylab {

enum class IndexSet { Naturals, Integers };

// A group family: the ambient (possibly infinite, locally finite) group all
// elements, endomorphisms and trajectories live in.  Value type; copies share
// the immutable implementation, and sharing is also how two objects are
// checked to belong to the same family.
class Group {
 public:
  enum class Kind { FinitePermutation, RestrictedPower, Lamplighter, FinitarySymmetric };

  // Finite permutation group <generators> on points 1..degree, fully
  // enumerated at construction together with its derived subgroup and center.
  static Group finite_permutation(int degree, const std::vector<Element>& generators,
                                  std::size_t budget = kDefaultBudget);
  // Direct sum of copies of a finite base group indexed by N or Z.
  static Group restricted_power(BaseGroup base, IndexSet indices);
  // Z_2^(Z) x| Z with (f,k)(g,m) = (f + shift_k(g), k+m).
  static Group lamplighter();
  // Finitary symmetric group on the positive integers.
  static Group finitary_symmetric();

  Kind kind() const { return impl_->kind; }
  bool same(const Group& other) const { return impl_ == other.impl_; }
  const std::string& describe() const { return impl_->name; }

  Element identity() const { return Element{}; }
  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  void validate(const Element& e) const;  // throws MalformedElement
  bool is_valid(const Element& e) const {
    try {
      validate(e);
      return true;
    } catch (const MalformedElement&) {
      return false;
    }
  }

  bool derived_membership(const Element& e) const;
  bool center_membership(const Element& e) const;

  // uniform-ish sample from a bounded window of the family; deterministic in
  // the rng state, used by all sampled validations
  Element random_element(Rng& rng) const;

  // full element list (FinitePermutation only)
  const ElementSet& elements() const;
  const ElementSet& derived_elements() const;
  int degree() const { return impl_->degree; }
  const BaseGroup& base() const;
  IndexSet index_set() const { return impl_->indices; }

  // canonical text form of an element and its parser (see README for the
  // per-family grammar); parse(format(x)) == x
  std::string format(const Element& e) const;
  Element parse(std::string_view text) const;

 private:
  struct Impl {
    Kind kind;
    std::string name;
    int degree = 0;
    ElementSet all, derived, center;
    std::shared_ptr<const BaseGroup> base;
    IndexSet indices = IndexSet::Naturals;
  };
  explicit Group(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// family arithmetic

namespace detail {

inline Element rp_mul(const BaseGroup& b, const Element& x, const Element& y) {
  Element out;
  out.coords.reserve(x.coords.size() + y.coords.size());
  auto i = x.coords.begin();
  auto j = y.coords.begin();
  while (i != x.coords.end() || j != y.coords.end()) {
    if (j == y.coords.end() || (i != x.coords.end() && i->first < j->first)) {
      out.coords.push_back(*i++);
    } else if (i == x.coords.end() || j->first < i->first) {
      out.coords.push_back(*j++);
    } else {
      int v = b.mul(i->second, j->second);
      if (v != 0) out.coords.emplace_back(i->first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

inline Element rp_inv(const BaseGroup& b, const Element& x) {
  Element out = x;
  for (auto& [i, v] : out.coords) v = b.inv(v);
  return out;
}

inline std::int32_t shifted_pos(std::int32_t pos, std::int64_t by) {
  std::int64_t p = static_cast<std::int64_t>(pos) + by;
  if (p < std::numeric_limits<std::int32_t>::min() ||
      p > std::numeric_limits<std::int32_t>::max())
    throw MalformedElement("lamplighter position out of range");
  return static_cast<std::int32_t>(p);
}

// symmetric difference of the lamp sets, the right one shifted by x.shift
inline Element lamp_mul(const Element& x, const Element& y) {
  Element out;
  out.shift = x.shift + y.shift;
  out.coords.reserve(x.coords.size() + y.coords.size());
  auto i = x.coords.begin();
  auto j = y.coords.begin();
  while (i != x.coords.end() || j != y.coords.end()) {
    std::int32_t jpos = j == y.coords.end()
                            ? 0
                            : shifted_pos(j->first, x.shift);
    if (j == y.coords.end() || (i != x.coords.end() && i->first < jpos)) {
      out.coords.push_back(*i++);
    } else if (i == x.coords.end() || jpos < i->first) {
      out.coords.emplace_back(jpos, 1);
      ++j;
    } else {
      ++i;  // lamp toggled twice
      ++j;
    }
  }
  return out;
}

inline Element lamp_inv(const Element& x) {
  Element out;
  out.shift = -x.shift;
  out.coords.reserve(x.coords.size());
  for (const auto& [pos, v] : x.coords)
    out.coords.emplace_back(shifted_pos(pos, -x.shift), v);
  return out;
}

}  // namespace detail

inline Group Group::finite_permutation(int degree, const std::vector<Element>& generators,
                                       std::size_t budget) {
  if (degree < 1) throw ConfigError("finite_permutation needs degree >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::FinitePermutation;
  impl->degree = degree;
  for (const Element& g : generators) {
    if (!perm::valid(g) || g.shift != 0)
      throw MalformedElement("generator is not a permutation");
    for (const auto& [p, q] : g.coords)
      if (p < 1 || p > degree)
        throw MalformedElement("generator moves a point outside 1..degree");
  }

  std::vector<Element> elems{Element{}};
  ElementHashSet seen{Element{}};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const Element& g : generators) {
      Element next = perm::mul(elems[i], g);
      if (seen.insert(next).second) {
        elems.push_back(std::move(next));
        if (elems.size() > budget) throw BudgetExceeded(budget, elems.size());
      }
    }
  impl->all = ElementSet(std::move(elems));

  // derived subgroup: closure of all commutators
  std::vector<Element> comms;
  for (const Element& a : impl->all)
    for (const Element& b : impl->all)
      comms.push_back(perm::mul(perm::mul(a, b), perm::mul(perm::inv(a), perm::inv(b))));
  ElementSet cset(std::move(comms));
  std::vector<Element> dwork(cset.begin(), cset.end());
  ElementHashSet dseen(dwork.begin(), dwork.end());
  for (std::size_t i = 0; i < dwork.size(); ++i)
    for (std::size_t j = 0; j < dwork.size(); ++j) {
      Element c = perm::mul(dwork[i], dwork[j]);
      if (dseen.insert(c).second) dwork.push_back(std::move(c));
    }
  impl->derived = ElementSet(std::move(dwork));

  std::vector<Element> centre;
  for (const Element& z : impl->all) {
    bool central = true;
    for (const Element& a : impl->all)
      if (perm::mul(z, a) != perm::mul(a, z)) {
        central = false;
        break;
      }
    if (central) centre.push_back(z);
  }
  impl->center = ElementSet(std::move(centre));

  impl->name = "finite_permutation(degree=" + std::to_string(degree) +
               ", order=" + std::to_string(impl->all.size()) + ")";
  return Group(std::move(impl));
}

inline Group Group::restricted_power(BaseGroup base, IndexSet indices) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::RestrictedPower;
  impl->base = std::make_shared<BaseGroup>(std::move(base));
  impl->indices = indices;
  impl->name = "restricted_power(" + impl->base->name() + ", " +
               (indices == IndexSet::Naturals ? "N" : "Z") + ")";
  return Group(std::move(impl));
}

inline Group Group::lamplighter() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Lamplighter;
  impl->name = "lamplighter";
  return Group(std::move(impl));
}

inline Group Group::finitary_symmetric() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::FinitarySymmetric;
  impl->name = "finitary_symmetric";
  return Group(std::move(impl));
}

inline Element Group::mul(const Element& a, const Element& b) const {
  switch (impl_->kind) {
    case Kind::FinitePermutation:
    case Kind::FinitarySymmetric:
      return perm::mul(a, b);
    case Kind::RestrictedPower:
      return detail::rp_mul(*impl_->base, a, b);
    case Kind::Lamplighter:
      return detail::lamp_mul(a, b);
  }
  throw Error("unreachable");
}

inline Element Group::inv(const Element& a) const {
  switch (impl_->kind) {
    case Kind::FinitePermutation:
    case Kind::FinitarySymmetric:
      return perm::inv(a);
    case Kind::RestrictedPower:
      return detail::rp_inv(*impl_->base, a);
    case Kind::Lamplighter:
      return detail::lamp_inv(a);
  }
  throw Error("unreachable");
}

inline void Group::validate(const Element& e) const {
  auto sorted_strict = [](const std::vector<Coord>& cs) {
    for (std::size_t i = 1; i < cs.size(); ++i)
      if (cs[i - 1].first >= cs[i].first) return false;
    return true;
  };
  switch (impl_->kind) {
    case Kind::FinitePermutation: {
      if (e.shift != 0 || !perm::valid(e))
        throw MalformedElement("not a canonical permutation");
      for (const auto& [p, q] : e.coords)
        if (p < 1 || p > impl_->degree)
          throw MalformedElement("permutation moves a point outside 1..degree");
      if (!impl_->all.contains(e))
        throw MalformedElement("permutation lies outside the generated group");
      return;
    }
    case Kind::FinitarySymmetric:
      if (e.shift != 0 || !perm::valid(e))
        throw MalformedElement("not a canonical permutation");
      for (const auto& [p, q] : e.coords)
        if (p < 1) throw MalformedElement("finitary symmetric points are positive");
      return;
    case Kind::RestrictedPower:
      if (e.shift != 0 || !sorted_strict(e.coords))
        throw MalformedElement("restricted power coordinates not canonical");
      for (const auto& [i, v] : e.coords) {
        if (v <= 0 || v >= impl_->base->order())
          throw MalformedElement("coordinate value outside the base group table");
        if (impl_->indices == IndexSet::Naturals && i < 0)
          throw MalformedElement("negative index in an N-indexed power");
      }
      return;
    case Kind::Lamplighter:
      if (!sorted_strict(e.coords))
        throw MalformedElement("lamp positions not canonical");
      for (const auto& [i, v] : e.coords)
        if (v != 1) throw MalformedElement("lamp values must be 1");
      return;
  }
}

inline bool Group::derived_membership(const Element& e) const {
  switch (impl_->kind) {
    case Kind::FinitePermutation:
      return impl_->derived.contains(e);
    case Kind::FinitarySymmetric:
      return perm::even(e);
    case Kind::RestrictedPower:
      for (const auto& [i, v] : e.coords)
        if (!impl_->base->in_derived(v)) return false;
      return true;
    case Kind::Lamplighter:
      return e.shift == 0 && e.coords.size() % 2 == 0;
  }
  throw Error("unreachable");
}

inline bool Group::center_membership(const Element& e) const {
  switch (impl_->kind) {
    case Kind::FinitePermutation:
      return impl_->center.contains(e);
    case Kind::RestrictedPower:
      for (const auto& [i, v] : e.coords)
        if (!impl_->base->in_center(v)) return false;
      return true;
    case Kind::FinitarySymmetric:
    case Kind::Lamplighter:
      return e.is_identity();  // both have trivial center
  }
  throw Error("unreachable");
}

inline Element Group::random_element(Rng& rng) const {
  switch (impl_->kind) {
    case Kind::FinitePermutation:
      return impl_->all.elements()[rng.index(impl_->all.size())];
    case Kind::FinitarySymmetric: {
      // random permutation of the window 1..8
      std::int32_t img[8];
      for (int i = 0; i < 8; ++i) img[i] = i + 1;
      for (int i = 7; i > 0; --i)
        std::swap(img[i], img[rng.index(static_cast<std::size_t>(i) + 1)]);
      Element e;
      for (int i = 0; i < 8; ++i)
        if (img[i] != i + 1) e.coords.emplace_back(i + 1, img[i]);
      return e;
    }
    case Kind::RestrictedPower: {
      Element e;
      int lo = impl_->indices == IndexSet::Naturals ? 0 : -4;
      int hi = impl_->indices == IndexSet::Naturals ? 7 : 4;
      for (int i = lo; i <= hi; ++i)
        if (rng.uniform(0, 3) == 0)
          e.coords.emplace_back(i, static_cast<std::int32_t>(
                                       rng.uniform(1, impl_->base->order() - 1)));
      return e;
    }
    case Kind::Lamplighter: {
      Element e;
      for (int i = -4; i <= 4; ++i)
        if (rng.uniform(0, 3) == 0) e.coords.emplace_back(i, 1);
      e.shift = rng.uniform(-3, 3);
      return e;
    }
  }
  throw Error("unreachable");
}

inline const ElementSet& Group::elements() const {
  if (impl_->kind != Kind::FinitePermutation)
    throw KindMismatch("full element list exists only for finite permutation families");
  return impl_->all;
}

inline const ElementSet& Group::derived_elements() const {
  if (impl_->kind != Kind::FinitePermutation)
    throw KindMismatch("enumerated derived subgroup exists only for finite permutation families");
  return impl_->derived;
}

inline const BaseGroup& Group::base() const {
  if (impl_->kind != Kind::RestrictedPower)
    throw KindMismatch("only restricted powers have a base group");
  return *impl_->base;
}

// ---------------------------------------------------------------------------
// element literals

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

inline long parse_long(std::string_view s, const char* what) {
  try {
    std::size_t used = 0;
    long v = std::stol(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw MalformedElement(std::string("expected an integer for ") + what +
                           ": '" + std::string(s) + "'");
  }
}

inline Element parse_cycles(std::string_view text) {
  Element out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '(') throw MalformedElement("expected '(' in cycle literal");
    std::size_t close = text.find(')', pos);
    if (close == std::string_view::npos)
      throw MalformedElement("unterminated cycle");
    std::vector<std::int32_t> cyc;
    for (const std::string& tok : split(text.substr(pos + 1, close - pos - 1), ','))
      cyc.push_back(static_cast<std::int32_t>(parse_long(tok, "cycle point")));
    if (cyc.size() < 2) throw MalformedElement("cycles need at least two points");
    Element c;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      std::int32_t from = cyc[i], to = cyc[(i + 1) % cyc.size()];
      if (from == to) throw MalformedElement("repeated point in cycle");
      c.coords.emplace_back(from, to);
    }
    std::sort(c.coords.begin(), c.coords.end());
    for (std::size_t i = 1; i < c.coords.size(); ++i)
      if (c.coords[i - 1].first == c.coords[i].first)
        throw MalformedElement("repeated point in cycle");
    out = perm::mul(out, c);
    pos = close + 1;
  }
  return out;
}

}  // namespace detail

inline std::string Group::format(const Element& e) const {
  if (e.is_identity()) return "1";
  switch (impl_->kind) {
    case Kind::FinitePermutation:
    case Kind::FinitarySymmetric:
      return detail::cycle_label(e);
    case Kind::RestrictedPower: {
      std::string out;
      for (const auto& [i, v] : e.coords) {
        if (!out.empty()) out += '*';
        out += "@" + std::to_string(i) + ":" + impl_->base->label(v);
      }
      return out;
    }
    case Kind::Lamplighter: {
      std::string out;
      for (const auto& [i, v] : e.coords) {
        if (!out.empty()) out += '*';
        out += "a@" + std::to_string(i);
      }
      if (e.shift != 0) {
        if (!out.empty()) out += '*';
        out += e.shift == 1 ? "t" : "t^" + std::to_string(e.shift);
      }
      return out;
    }
  }
  throw Error("unreachable");
}

inline Element Group::parse(std::string_view text) const {
  if (text.empty()) throw MalformedElement("empty element literal");
  if (text == "1") return identity();
  if (impl_->kind == Kind::FinitePermutation || impl_->kind == Kind::FinitarySymmetric) {
    Element e = detail::parse_cycles(text);
    validate(e);
    return e;
  }
  Element acc = identity();
  for (const std::string& atom : detail::split(text, '*')) {
    Element part;
    if (impl_->kind == Kind::RestrictedPower) {
      if (atom.size() < 2 || atom[0] != '@')
        throw MalformedElement("restricted power atoms look like @index:label");
      std::size_t colon = atom.find(':');
      if (colon == std::string::npos)
        throw MalformedElement("restricted power atoms look like @index:label");
      long idx = detail::parse_long(std::string_view(atom).substr(1, colon - 1), "coordinate index");
      int id = impl_->base->find_label(atom.substr(colon + 1));
      if (id < 0)
        throw MalformedElement("unknown base element label '" + atom.substr(colon + 1) + "'");
      if (id != 0) part.coords.emplace_back(static_cast<std::int32_t>(idx), id);
    } else {  // lamplighter
      if (atom == "t") {
        part.shift = 1;
      } else if (atom.rfind("t^", 0) == 0) {
        part.shift = detail::parse_long(std::string_view(atom).substr(2), "shift power");
      } else if (atom.rfind("a@", 0) == 0) {
        part.coords.emplace_back(
            static_cast<std::int32_t>(detail::parse_long(std::string_view(atom).substr(2), "lamp position")),
            1);
      } else if (atom == "1") {
        // identity atom
      } else {
        throw MalformedElement("unknown lamplighter atom '" + atom + "'");
      }
    }
    acc = mul(acc, part);
  }
  validate(acc);
  return acc;
}

// ---------------------------------------------------------------------------
// subgroup closure

// <X>: saturate X u X^-1 u {1} under multiplication.  Throws BudgetExceeded
// as soon as the closure is known to pass the cap, so infinite subgroups fail
// fast instead of looping.
inline ElementSet subgroup_closure(const Group& g, const ElementSet& x,
                                   std::size_t budget = kDefaultBudget) {
  std::vector<Element> gens{g.identity()};
  for (const Element& e : x) {
    g.validate(e);
    gens.push_back(e);
    gens.push_back(g.inv(e));
  }
  ElementSet seed(std::move(gens));

  std::vector<Element> work(seed.begin(), seed.end());
  ElementHashSet seen(work.begin(), work.end());
  for (std::size_t i = 0; i < work.size(); ++i)
    for (const Element& s : seed) {
      Element next = g.mul(work[i], s);
      if (seen.insert(next).second) {
        work.push_back(std::move(next));
        if (work.size() > budget) throw BudgetExceeded(budget, work.size());
      }
    }
  return ElementSet(std::move(work));
}

inline bool is_subgroup(const Group& g, const ElementSet& h) {
  if (!h.contains(g.identity())) return false;
  for (const Element& a : h) {
    if (!h.contains(g.inv(a))) return false;
    for (const Element& b : h)
      if (!h.contains(g.mul(a, b))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// subgroup specs

// A (normal) subgroup H of the ambient family, given by a membership
// predicate plus, when the quotient has a cheap canonical form, a coset key:
// coset_key(x) == coset_key(y) iff x and y lie in the same coset of H.
// `sample` draws members for the randomized validations.
struct SubgroupSpec {
  std::string name;
  bool is_central = false;
  std::function<bool(const Element&)> membership;
  std::function<Element(const Element&)> coset_key;  // may be empty
  std::function<Element(Rng&)> sample;               // may be empty

  bool has_key() const { return static_cast<bool>(coset_key); }
};

inline SubgroupSpec whole_spec(const Group& g) {
  SubgroupSpec s;
  s.name = "whole";
  s.membership = [](const Element&) { return true; };
  s.coset_key = [](const Element&) { return Element{}; };
  s.sample = [g](Rng& rng) { return g.random_element(rng); };
  return s;
}

inline SubgroupSpec derived_spec(const Group& g) {
  SubgroupSpec s;
  s.name = "derived";
  s.membership = [g](const Element& e) { return g.derived_membership(e); };
  switch (g.kind()) {
    case Group::Kind::RestrictedPower: {
      const BaseGroup& b = g.base();
      bool central = true;
      for (int d : b.derived_elements())
        if (!b.in_center(d)) central = false;
      s.is_central = central;
      s.coset_key = [g](const Element& e) {
        Element key;
        for (const auto& [i, v] : e.coords) {
          int rep = g.base().derived_coset_rep(v);
          if (rep != 0) key.coords.emplace_back(i, rep);
        }
        return key;
      };
      s.sample = [g](Rng& rng) {
        const auto& derived = g.base().derived_elements();
        Element e;
        int lo = g.index_set() == IndexSet::Naturals ? 0 : -4;
        for (int i = lo; i <= lo + 7; ++i)
          if (rng.uniform(0, 2) == 0) {
            int v = derived[rng.index(derived.size())];
            if (v != 0) e.coords.emplace_back(i, v);
          }
        return e;
      };
      break;
    }
    case Group::Kind::Lamplighter:
      s.coset_key = [](const Element& e) {
        Element key;
        if (e.coords.size() % 2 == 1) key.coords.emplace_back(0, 1);
        key.shift = e.shift;
        return key;
      };
      s.sample = [](Rng& rng) {
        Element e;
        for (int i = -4; i <= 4; ++i)
          if (rng.coin()) e.coords.emplace_back(i, 1);
        if (e.coords.size() % 2 == 1) e.coords.pop_back();
        return e;
      };
      break;
    case Group::Kind::FinitarySymmetric:
      s.coset_key = [](const Element& e) {
        Element key;
        if (!perm::even(e)) key.coords = {{1, 2}, {2, 1}};
        return key;
      };
      s.sample = [g](Rng& rng) {
        Element e = g.random_element(rng);
        if (!perm::even(e)) e = perm::mul(e, Element{{{1, 2}, {2, 1}}, 0});
        return e;
      };
      break;
    case Group::Kind::FinitePermutation: {
      bool central = true;
      for (const Element& d : g.derived_elements())
        if (!g.center_membership(d)) central = false;
      s.is_central = central;
      s.coset_key = [g](const Element& e) {
        Element best = g.mul(e, *g.derived_elements().begin());
        for (const Element& d : g.derived_elements())
          best = std::min(best, g.mul(e, d));
        return best;
      };
      s.sample = [g](Rng& rng) {
        return g.derived_elements().elements()[rng.index(g.derived_elements().size())];
      };
      break;
    }
  }
  return s;
}

inline SubgroupSpec center_spec(const Group& g) {
  SubgroupSpec s;
  s.name = "center";
  s.is_central = true;
  s.membership = [g](const Element& e) { return g.center_membership(e); };
  switch (g.kind()) {
    case Group::Kind::RestrictedPower: {
      s.coset_key = [g](const Element& e) {
        Element key;
        for (const auto& [i, v] : e.coords) {
          int rep = g.base().center_coset_rep(v);
          if (rep != 0) key.coords.emplace_back(i, rep);
        }
        return key;
      };
      s.sample = [g](Rng& rng) {
        const BaseGroup& b = g.base();
        std::vector<int> centre;
        for (int v = 1; v < b.order(); ++v)
          if (b.in_center(v)) centre.push_back(v);
        Element e;
        if (centre.empty()) return e;
        int lo = g.index_set() == IndexSet::Naturals ? 0 : -4;
        for (int i = lo; i <= lo + 7; ++i)
          if (rng.uniform(0, 2) == 0)
            e.coords.emplace_back(i, centre[rng.index(centre.size())]);
        return e;
      };
      break;
    }
    case Group::Kind::FinitePermutation: {
      s.coset_key = [g](const Element& e) {
        Element best = e;
        bool first = true;
        for (const Element& z : g.elements())
          if (g.center_membership(z)) {
            Element cand = g.mul(e, z);
            if (first || cand < best) best = cand;
            first = false;
          }
        return best;
      };
      s.sample = [g](Rng& rng) {
        std::vector<Element> centre;
        for (const Element& z : g.elements())
          if (g.center_membership(z)) centre.push_back(z);
        return centre[rng.index(centre.size())];
      };
      break;
    }
    case Group::Kind::Lamplighter:
    case Group::Kind::FinitarySymmetric:
      // trivial center: every element is its own coset key
      s.coset_key = [](const Element& e) { return e; };
      s.sample = [](Rng&) { return Element{}; };
      break;
  }
  return s;
}

// lamplighter base Z_2^(Z); the quotient is keyed by the shift integer
inline SubgroupSpec base_spec(const Group& g) {
  if (g.kind() != Group::Kind::Lamplighter)
    throw KindMismatch("base subgroup spec exists only for the lamplighter family");
  SubgroupSpec s;
  s.name = "base";
  s.membership = [](const Element& e) { return e.shift == 0; };
  s.coset_key = [](const Element& e) {
    Element key;
    key.shift = e.shift;
    return key;
  };
  s.sample = [](Rng& rng) {
    Element e;
    for (int i = -4; i <= 4; ++i)
      if (rng.coin()) e.coords.emplace_back(i, 1);
    return e;
  };
  return s;
}

inline SubgroupSpec alt_spec(const Group& g) {
  if (g.kind() != Group::Kind::FinitarySymmetric)
    throw KindMismatch("alt subgroup spec exists only for the finitary symmetric family");
  SubgroupSpec s = derived_spec(g);
  s.name = "alt";
  return s;
}

// Wraps an explicitly enumerated finite subgroup; the coset key is the
// smallest element of x*H.
inline SubgroupSpec finite_subgroup_spec(const Group& g, ElementSet h,
                                         std::string name = "finite_subgroup") {
  if (!is_subgroup(g, h)) throw Error("finite_subgroup_spec: set is not a subgroup");
  auto shared = std::make_shared<ElementSet>(std::move(h));
  SubgroupSpec s;
  s.name = std::move(name);
  s.membership = [shared](const Element& e) { return shared->contains(e); };
  s.coset_key = [g, shared](const Element& e) {
    Element best = g.mul(e, *shared->begin());
    for (const Element& x : *shared) best = std::min(best, g.mul(e, x));
    return best;
  };
  s.sample = [shared](Rng& rng) { return shared->elements()[rng.index(shared->size())]; };
  return s;
}

// the named specs a config file can ask for
inline SubgroupSpec named_spec(const Group& g, const std::string& name) {
  if (name == "whole") return whole_spec(g);
  if (name == "derived") return derived_spec(g);
  if (name == "center") return center_spec(g);
  if (name == "base") return base_spec(g);
  if (name == "alt") return alt_spec(g);
  throw ConfigError("unknown subgroup spec '" + name + "'");
}

// sampled normality check: g*h*g^-1 stays in H
inline void validate_normal(const Group& g, const SubgroupSpec& h, Rng& rng,
                            int pairs = 256) {
  if (!h.sample) return;  // membership-only spec, nothing to draw from
  for (int i = 0; i < pairs; ++i) {
    Element a = g.random_element(rng);
    Element m = h.sample(rng);
    if (!h.membership(m))
      throw Error("subgroup spec '" + h.name + "' sampler escaped the subgroup");
    if (!h.membership(g.mul(g.mul(a, m), g.inv(a))))
      throw NotInvariant("subgroup spec '" + h.name +
                         "' is not normal: witness " + g.format(m) +
                         " conjugated by " + g.format(a));
  }
}

// sampled centrality check, raises NotCentral with a witness pair
inline void validate_central(const Group& g, const SubgroupSpec& h, Rng& rng,
                             int pairs = 256) {
  if (!h.sample) throw NotCentral("spec '" + h.name + "' has no sampler to certify centrality");
  for (int i = 0; i < pairs; ++i) {
    Element a = g.random_element(rng);
    Element m = h.sample(rng);
    if (g.mul(a, m) != g.mul(m, a))
      throw NotCentral("spec '" + h.name + "' is not central: " + g.format(m) +
                       " does not commute with " + g.format(a));
  }
}

// ---------------------------------------------------------------------------
// window subgroups (the shipped exhaustions)

// Width-w pieces that exhaust the family: full base copies on coordinates
// [0,w) for restricted powers, lamp configurations on [0,w) for the
// lamplighter, permutations of 1..w for the symmetric families.
inline ElementSet window_subgroup(const Group& g, int w,
                                  std::size_t budget = kDefaultBudget) {
  if (w < 1) throw ConfigError("window width must be positive");
  switch (g.kind()) {
    case Group::Kind::RestrictedPower: {
      std::vector<Element> out{g.identity()};
      for (int i = 0; i < w; ++i) {
        std::vector<Element> next;
        next.reserve(out.size() * static_cast<std::size_t>(g.base().order()));
        for (const Element& e : out)
          for (int v = 0; v < g.base().order(); ++v) {
            Element x = e;
            if (v != 0) x.coords.emplace_back(i, v);
            next.push_back(std::move(x));
          }
        out = std::move(next);
        if (out.size() > budget) throw BudgetExceeded(budget, out.size());
      }
      return ElementSet(std::move(out));
    }
    case Group::Kind::Lamplighter: {
      if (w > 20) throw BudgetExceeded(budget, std::size_t(1) << w);
      std::vector<Element> out;
      for (std::uint32_t mask = 0; mask < (1u << w); ++mask) {
        Element e;
        for (int i = 0; i < w; ++i)
          if (mask & (1u << i)) e.coords.emplace_back(i, 1);
        out.push_back(std::move(e));
      }
      return ElementSet(std::move(out));
    }
    case Group::Kind::FinitarySymmetric: {
      std::vector<Element> gens;
      for (int i = 1; i < w; ++i)
        gens.push_back(Element{{{i, i + 1}, {i + 1, i}}, 0});
      return subgroup_closure(g, ElementSet(std::move(gens)), budget);
    }
    case Group::Kind::FinitePermutation:
      return g.elements();  // already finite; the window is the whole group
  }
  throw Error("unreachable");
}

}  // namespace entropylab

#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "entropylab/groups.hpp"

namespace entropylab {

inline constexpr std::uint64_t kDefaultValidationSeed = 0x5eed;
inline constexpr int kDefaultValidationPairs = 256;

// An endomorphism of a group family.  Construction validates the
// homomorphism law phi(x*y) = phi(x)*phi(y) on seeded random pairs (the seed
// is kept in the construction report); table maps over small finite groups
// are checked exhaustively instead.
class Endo {
 public:
  enum class Kind {
    Identity,
    ShiftRight,
    ShiftLeftInverse,
    Inner,
    CoordinatewisePower,
    FiniteTable,
    Compose,
  };

  struct ValidationReport {
    std::uint64_t seed = 0;
    int pairs = 0;        // sampled pairs (0 when the check was exhaustive)
    bool exhaustive = false;
  };

  static Endo identity(const Group& g);
  // index+1 on restricted powers; on the lamplighter this is conjugation by t
  static Endo shift_right(const Group& g, std::uint64_t seed = kDefaultValidationSeed);
  // inverse shift; only Z-indexed families have one
  static Endo shift_left_inverse(const Group& g, std::uint64_t seed = kDefaultValidationSeed);
  static Endo inner(const Group& g, const Element& h, std::uint64_t seed = kDefaultValidationSeed);
  // x -> x^k coordinatewise; admitted only over abelian bases
  static Endo coordinatewise_power(const Group& g, long k, std::uint64_t seed = kDefaultValidationSeed);
  // explicit map on a finite permutation group, given by images of a
  // generating set and extended multiplicatively
  static Endo finite_table(const Group& g,
                           const std::vector<std::pair<Element, Element>>& generator_images,
                           std::uint64_t seed = kDefaultValidationSeed);
  // parts[0](parts[1](...)); the rightmost factor is applied first
  static Endo compose(std::vector<Endo> parts, std::uint64_t seed = kDefaultValidationSeed);

  Kind kind() const { return impl_->kind; }
  const Group& group() const { return impl_->group; }
  const ValidationReport& validation() const { return impl_->report; }

  Element apply(const Element& x) const;
  ElementSet apply_set(const ElementSet& xs) const;

  bool is_automorphism() const;
  Endo inverse() const;  // NotAutomorphism when there is none

  // same action, domain narrowed to H; phi(H) subset H is checked on samples
  Endo restricted(const SubgroupSpec& h, Rng& rng, int pairs = kDefaultValidationPairs) const;
  // xi o phi o xi^-1 for an automorphism xi of the same family
  Endo conjugated(const Endo& xi) const;

  std::string describe() const;

 private:
  struct Impl {
    Kind kind = Kind::Identity;
    Group group;
    ValidationReport report;
    // Inner
    Element conj, conj_inv;
    // CoordinatewisePower
    int power = 1, inverse_power = -1;  // inverse_power < 0: not a unit
    // FiniteTable
    std::unordered_map<Element, Element, ElementHash> table;
    bool bijective = false;
    // Compose
    std::vector<Endo> parts;
    // restriction domain, when narrowed
    std::shared_ptr<const SubgroupSpec> domain;

    explicit Impl(Group g) : group(std::move(g)) {}
  };

  explicit Endo(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  Element apply_raw(const Element& x) const;
  static void validate_homomorphism(Impl& impl, std::uint64_t seed, int pairs);
  std::shared_ptr<const Impl> impl_;
};

inline Element Endo::apply_raw(const Element& x) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case Kind::Identity:
      return x;
    case Kind::ShiftRight: {
      Element out = x;
      for (auto& [i, v] : out.coords) i = detail::shifted_pos(i, 1);
      return out;
    }
    case Kind::ShiftLeftInverse: {
      Element out = x;
      for (auto& [i, v] : out.coords) i = detail::shifted_pos(i, -1);
      return out;
    }
    case Kind::Inner:
      return im.group.mul(im.group.mul(im.conj, x), im.conj_inv);
    case Kind::CoordinatewisePower: {
      const BaseGroup& b = im.group.base();
      Element out;
      for (const auto& [i, v] : x.coords) {
        int acc = 0;
        for (int k = 0; k < im.power; ++k) acc = b.mul(acc, v);
        if (acc != 0) out.coords.emplace_back(i, acc);
      }
      return out;
    }
    case Kind::FiniteTable: {
      auto it = im.table.find(x);
      if (it == im.table.end())
        throw MalformedElement("element missing from the finite table");
      return it->second;
    }
    case Kind::Compose: {
      Element y = x;
      for (auto it = im.parts.rbegin(); it != im.parts.rend(); ++it) y = it->apply(y);
      return y;
    }
  }
  throw Error("unreachable");
}

inline Element Endo::apply(const Element& x) const {
  impl_->group.validate(x);
  if (impl_->domain && !impl_->domain->membership(x))
    throw MalformedElement("element lies outside the restriction domain '" +
                           impl_->domain->name + "'");
  return apply_raw(x);
}

inline ElementSet Endo::apply_set(const ElementSet& xs) const {
  std::vector<Element> out;
  out.reserve(xs.size());
  for (const Element& x : xs) out.push_back(apply(x));
  return ElementSet(std::move(out));
}

inline void Endo::validate_homomorphism(Impl& impl, std::uint64_t seed, int pairs) {
  impl.report.seed = seed;
  const Group& g = impl.group;
  Endo probe{std::shared_ptr<const Impl>(&impl, [](const Impl*) {})};

  auto check = [&](const Element& x, const Element& y) {
    Element lhs = probe.apply_raw(g.mul(x, y));
    Element rhs = g.mul(probe.apply_raw(x), probe.apply_raw(y));
    if (lhs != rhs)
      throw NotHomomorphism("not a homomorphism: phi(x*y) != phi(x)*phi(y) at x=" +
                            g.format(x) + " y=" + g.format(y));
    g.validate(lhs);
  };

  if (impl.kind == Kind::FiniteTable &&
      g.elements().size() * g.elements().size() <= 65536) {
    for (const Element& x : g.elements())
      for (const Element& y : g.elements()) check(x, y);
    impl.report.exhaustive = true;
    return;
  }
  Rng rng(seed);
  impl.report.pairs = pairs;
  for (int i = 0; i < pairs; ++i) check(g.random_element(rng), g.random_element(rng));
}

inline Endo Endo::identity(const Group& g) {
  auto impl = std::make_shared<Impl>(g);
  impl->kind = Kind::Identity;
  return Endo(std::move(impl));
}

inline Endo Endo::shift_right(const Group& g, std::uint64_t seed) {
  if (g.kind() != Group::Kind::RestrictedPower && g.kind() != Group::Kind::Lamplighter)
    throw KindMismatch("shift_right needs an indexed family");
  auto impl = std::make_shared<Impl>(g);
  impl->kind = Kind::ShiftRight;
  validate_homomorphism(*impl, seed, kDefaultValidationPairs);
  return Endo(std::move(impl));
}

inline Endo Endo::shift_left_inverse(const Group& g, std::uint64_t seed) {
  bool ok = g.kind() == Group::Kind::Lamplighter ||
            (g.kind() == Group::Kind::RestrictedPower &&
             g.index_set() == IndexSet::Integers);
  if (!ok)
    throw KindMismatch("shift_left_inverse needs a Z-indexed family");
  auto impl = std::make_shared<Impl>(g);
  impl->kind = Kind::ShiftLeftInverse;
  validate_homomorphism(*impl, seed, kDefaultValidationPairs);
  return Endo(std::move(impl));
}

inline Endo Endo::inner(const Group& g, const Element& h, std::uint64_t seed) {
  g.validate(h);
  auto impl = std::make_shared<Impl>(g);
  impl->kind = Kind::Inner;
  impl->conj = h;
  impl->conj_inv = g.inv(h);
  validate_homomorphism(*impl, seed, kDefaultValidationPairs);
  return Endo(std::move(impl));
}

inline Endo Endo::coordinatewise_power(const Group& g, long k, std::uint64_t seed) {
  if (g.kind() != Group::Kind::RestrictedPower)
    throw KindMismatch("coordinatewise_power needs a restricted power family");
  if (!g.base().abelian())
    throw NotHomomorphism("coordinatewise_power over a non-abelian base is not a homomorphism");
  auto impl = std::make_shared<Impl>(g);
  impl->kind = Kind::CoordinatewisePower;
  int ex = g.base().exponent();
  impl->power = static_cast<int>(((k % ex) + ex) % ex);
  if (std::gcd(impl->power, ex) == 1)
    for (int kp = 1; kp < ex; ++kp)
      if ((static_cast<long>(kp) * impl->power) % ex == 1 % ex) impl->inverse_power = kp;
  if (ex == 1) impl->inverse_power = 1;
  validate_homomorphism(*impl, seed, kDefaultValidationPairs);
  return Endo(std::move(impl));
}

inline Endo Endo::finite_table(const Group& g,
                               const std::vector<std::pair<Element, Element>>& generator_images,
                               std::uint64_t seed) {
  if (g.kind() != Group::Kind::FinitePermutation)
    throw KindMismatch("finite_table needs a finite permutation family");
  if (generator_images.empty()) throw ConfigError("finite_table needs generator images");
  auto impl = std::make_shared<Impl>(g);
  impl->kind = Kind::FiniteTable;

  // extend multiplicatively: image(x*s) = image(x)*image(s)
  impl->table.emplace(g.identity(), g.identity());
  std::vector<Element> work{g.identity()};
  for (const auto& [s, img] : generator_images) {
    g.validate(s);
    g.validate(img);
  }
  for (std::size_t i = 0; i < work.size(); ++i)
    for (const auto& [s, img] : generator_images) {
      Element next = g.mul(work[i], s);
      Element next_img = g.mul(impl->table.at(work[i]), img);
      auto [it, fresh] = impl->table.emplace(next, next_img);
      if (fresh)
        work.push_back(next);
      else if (it->second != next_img)
        throw NotHomomorphism("finite_table images are inconsistent at " + g.format(next));
    }
  if (impl->table.size() != g.elements().size())
    throw ConfigError("finite_table images do not cover a generating set");

  ElementHashSet image_set;
  for (const auto& [x, y] : impl->table) image_set.insert(y);
  impl->bijective = image_set.size() == impl->table.size();

  validate_homomorphism(*impl, seed, kDefaultValidationPairs);
  return Endo(std::move(impl));
}

inline Endo Endo::compose(std::vector<Endo> parts, std::uint64_t seed) {
  if (parts.empty()) throw ConfigError("compose needs at least one part");
  for (const Endo& p : parts)
    if (!p.group().same(parts.front().group()))
      throw KindMismatch("compose parts act on different families");
  auto impl = std::make_shared<Impl>(parts.front().group());
  impl->kind = Kind::Compose;
  impl->parts = std::move(parts);
  validate_homomorphism(*impl, seed, kDefaultValidationPairs);
  return Endo(std::move(impl));
}

inline bool Endo::is_automorphism() const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case Kind::Identity:
      return true;
    case Kind::ShiftRight:
      return im.group.kind() == Group::Kind::Lamplighter ||
             im.group.index_set() == IndexSet::Integers;
    case Kind::ShiftLeftInverse:
      return true;
    case Kind::Inner:
      return true;
    case Kind::CoordinatewisePower:
      return im.inverse_power >= 0;
    case Kind::FiniteTable:
      return im.bijective;
    case Kind::Compose:
      for (const Endo& p : im.parts)
        if (!p.is_automorphism()) return false;
      return true;
  }
  return false;
}

inline Endo Endo::inverse() const {
  const Impl& im = *impl_;
  if (!is_automorphism())
    throw NotAutomorphism("endomorphism '" + describe() + "' has no inverse");
  switch (im.kind) {
    case Kind::Identity:
      return *this;
    case Kind::ShiftRight:
      return shift_left_inverse(im.group, im.report.seed ? im.report.seed : kDefaultValidationSeed);
    case Kind::ShiftLeftInverse:
      return shift_right(im.group, im.report.seed ? im.report.seed : kDefaultValidationSeed);
    case Kind::Inner:
      return inner(im.group, im.conj_inv);
    case Kind::CoordinatewisePower:
      return coordinatewise_power(im.group, im.inverse_power);
    case Kind::FiniteTable: {
      auto impl = std::make_shared<Impl>(im.group);
      impl->kind = Kind::FiniteTable;
      for (const auto& [x, y] : im.table) impl->table.emplace(y, x);
      impl->bijective = true;
      validate_homomorphism(*impl, kDefaultValidationSeed, kDefaultValidationPairs);
      return Endo(std::move(impl));
    }
    case Kind::Compose: {
      std::vector<Endo> inv_parts;
      for (auto it = im.parts.rbegin(); it != im.parts.rend(); ++it)
        inv_parts.push_back(it->inverse());
      return compose(std::move(inv_parts));
    }
  }
  throw Error("unreachable");
}

inline Endo Endo::restricted(const SubgroupSpec& h, Rng& rng, int pairs) const {
  // invariance: phi(H) subset H, witnessed failure raises NotInvariant
  for (int i = 0; i < pairs; ++i) {
    Element m = h.sample ? h.sample(rng) : impl_->group.random_element(rng);
    if (!h.membership(m)) continue;
    Element img = apply_raw(m);
    if (!h.membership(img))
      throw NotInvariant("subgroup '" + h.name + "' is not phi-invariant: phi(" +
                         impl_->group.format(m) + ") = " + impl_->group.format(img) +
                         " escapes");
  }
  auto impl = std::make_shared<Impl>(*impl_);
  impl->domain = std::make_shared<SubgroupSpec>(h);
  return Endo(std::move(impl));
}

inline Endo Endo::conjugated(const Endo& xi) const {
  if (!xi.group().same(group()))
    throw KindMismatch("conjugating automorphism acts on a different family");
  if (!xi.is_automorphism())
    throw NotAutomorphism("conjugation needs an automorphism");
  if (xi.kind() == Kind::Identity) return *this;
  return compose({xi, *this, xi.inverse()});
}

inline std::string Endo::describe() const {
  const Impl& im = *impl_;
  std::string out;
  switch (im.kind) {
    case Kind::Identity:
      out = "identity";
      break;
    case Kind::ShiftRight:
      out = "shift_right";
      break;
    case Kind::ShiftLeftInverse:
      out = "shift_left_inverse";
      break;
    case Kind::Inner:
      out = "inner(" + im.group.format(im.conj) + ")";
      break;
    case Kind::CoordinatewisePower:
      out = "power(" + std::to_string(im.power) + ")";
      break;
    case Kind::FiniteTable:
      out = "table(" + std::to_string(im.table.size()) + " entries)";
      break;
    case Kind::Compose: {
      out = "compose[";
      for (std::size_t i = 0; i < im.parts.size(); ++i) {
        if (i) out += ", ";
        out += im.parts[i].describe();
      }
      out += "]";
      break;
    }
  }
  if (im.domain) out += "|" + im.domain->name;
  return out;
}

}  // namespace entropylab

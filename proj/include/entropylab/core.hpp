#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace entropylab {

// Default hard cap on the number of elements any closure or trajectory is
// allowed to materialize.  Overridable per call and via ENTROPYLAB_BUDGET.
inline constexpr std::size_t kDefaultBudget = 1'000'000;

inline std::size_t default_budget() {
  if (const char* env = std::getenv("ENTROPYLAB_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultBudget;
}

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class MalformedElement : public Error {
 public:
  using Error::Error;
};

// Mixing objects that belong to different group families.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t budget, std::size_t cardinality)
      : Error("element budget exceeded: " + std::to_string(cardinality) +
              " > " + std::to_string(budget)),
        budget_(budget),
        cardinality_(cardinality) {}
  std::size_t budget() const { return budget_; }
  std::size_t cardinality() const { return cardinality_; }

 private:
  std::size_t budget_;
  std::size_t cardinality_;
};

class NotHomomorphism : public Error {
 public:
  using Error::Error;
};

class NotAutomorphism : public Error {
 public:
  using Error::Error;
};

class NotInvariant : public Error {
 public:
  using Error::Error;
};

class NotCentral : public Error {
 public:
  using Error::Error;
};

class NoCertificate : public Error {
 public:
  using Error::Error;
};

class OracleMissing : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Element
//
// One value type shared by all families, always in canonical form so that
// operator== is exact equality in the group:
//   - permutations (finite or finitary): coords = sorted (point, image) pairs
//     restricted to moved points, shift unused
//   - restricted powers: coords = sorted (index, base element id) pairs with
//     identity coordinates omitted, shift unused
//   - lamplighter: coords = sorted (lamp position, 1) pairs, shift = the
//     Z-component
// The identity of every family is {} with shift 0.

using Coord = std::pair<std::int32_t, std::int32_t>;

struct Element {
  std::vector<Coord> coords;
  std::int64_t shift = 0;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
  bool is_identity() const { return coords.empty() && shift == 0; }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(e.shift));
    for (const auto& [i, v] : e.coords) {
      mix(static_cast<std::uint32_t>(i));
      mix(static_cast<std::uint32_t>(v));
    }
    return static_cast<std::size_t>(h);
  }
};

using ElementHashSet = std::unordered_set<Element, ElementHash>;

// Sorted, duplicate-free set of elements.  Sorting makes set equality, subset
// tests and report output deterministic.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::vector<Element> v) : elems_(std::move(v)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }
  static ElementSet from_hash_set(const ElementHashSet& s) {
    std::vector<Element> v(s.begin(), s.end());
    return ElementSet(std::move(v));
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(const Element& e) const {
    return std::binary_search(elems_.begin(), elems_.end(), e);
  }
  // Keeps the canonical order; no-op on duplicates.
  void insert(Element e) {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), e);
    if (it == elems_.end() || *it != e) elems_.insert(it, std::move(e));
  }

  const std::vector<Element>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

  bool subset_of(const ElementSet& other) const {
    if (size() > other.size()) return false;
    for (const Element& e : elems_)
      if (!other.contains(e)) return false;
    return true;
  }

 private:
  std::vector<Element> elems_;
};

// ---------------------------------------------------------------------------
// Sparse permutation arithmetic (shared by FinitePermutation and
// FinitarySymmetric).  Points are positive integers; an element stores only
// its moved points.

namespace perm {

inline std::int32_t image(const Element& p, std::int32_t point) {
  auto it = std::lower_bound(
      p.coords.begin(), p.coords.end(), point,
      [](const Coord& c, std::int32_t x) { return c.first < x; });
  if (it != p.coords.end() && it->first == point) return it->second;
  return point;
}

// Composition acting on the right operand first: (a*b)(x) = a(b(x)).
inline Element mul(const Element& a, const Element& b) {
  std::vector<std::int32_t> pts;
  pts.reserve(a.coords.size() + b.coords.size());
  for (const auto& c : a.coords) pts.push_back(c.first);
  for (const auto& c : b.coords) pts.push_back(c.first);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Element out;
  for (std::int32_t x : pts) {
    std::int32_t y = image(a, image(b, x));
    if (y != x) out.coords.emplace_back(x, y);
  }
  return out;
}

inline Element inv(const Element& a) {
  Element out;
  out.coords.reserve(a.coords.size());
  for (const auto& [x, y] : a.coords) out.coords.emplace_back(y, x);
  std::sort(out.coords.begin(), out.coords.end());
  return out;
}

// A sparse coord list is a valid permutation iff the images are a
// permutation of the points and no point is listed as fixed.
inline bool valid(const Element& p) {
  std::vector<std::int32_t> pts, imgs;
  for (const auto& [x, y] : p.coords) {
    if (x == y) return false;
    pts.push_back(x);
    imgs.push_back(y);
  }
  if (!std::is_sorted(pts.begin(), pts.end())) return false;
  if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) return false;
  std::sort(imgs.begin(), imgs.end());
  return pts == imgs;
}

// true for even permutations
inline bool even(const Element& p) {
  std::vector<std::int32_t> seen;
  int transpositions = 0;
  for (const auto& [start, unused] : p.coords) {
    if (std::find(seen.begin(), seen.end(), start) != seen.end()) continue;
    int len = 0;
    std::int32_t x = start;
    do {
      seen.push_back(x);
      x = image(p, x);
      ++len;
    } while (x != start);
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

// decompose into cycles, each rotated to start at its smallest point,
// cycles ordered by starting point
inline std::vector<std::vector<std::int32_t>> cycles(const Element& p) {
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::int32_t> seen;
  for (const auto& [start, unused] : p.coords) {
    if (std::find(seen.begin(), seen.end(), start) != seen.end()) continue;
    std::vector<std::int32_t> cyc;
    std::int32_t x = start;
    do {
      cyc.push_back(x);
      seen.push_back(x);
      x = image(p, x);
    } while (x != start);
    out.push_back(std::move(cyc));
  }
  return out;
}

}  // namespace perm

// ---------------------------------------------------------------------------
// Deterministic RNG used for all sampled validations and property trials.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

  // uniform in [lo, hi] inclusive
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1));
  }
  bool coin() { return uniform(0, 1) == 1; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// log of a cardinality, kept next to the exact integer it came from
struct LogCard {
  std::uint64_t card = 1;
  double log_value = 0.0;
};

inline std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::nullopt;
  return a * b;
}

}  // namespace entropylab

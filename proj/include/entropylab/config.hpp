#pragma once

#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entropylab/at.hpp"
#include "entropylab/props.hpp"

namespace entropylab {

// ---------------------------------------------------------------------------
// Line-based experiment files:
//
//   schema = 1
//   [family]
//   kind = restricted_power
//   base = heisenberg
//   p = 2
//   ...
//
// '#' starts a comment, sections and keys are closed-world (typos are
// errors), and every diagnostic carries the line number.

struct ConfigEntry {
  std::string key, value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  std::vector<ConfigEntry> entries;
  int line = 0;

  const ConfigEntry* find(const std::string& key) const {
    for (const ConfigEntry& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

class Config {
 public:
  static Config parse(std::istream& in) {
    static const std::map<std::string, std::set<std::string>> kAllowed = {
        {"family",
         {"kind", "base", "p", "n", "index_set", "degree", "generators"}},
        {"endomorphism", {"kind", "element", "power", "images"}},
        {"subgroup", {"name"}},
        {"exhaustion", {"windows", "extra_set"}},
        {"set", {"kind", "width", "elements", "n"}},
        {"run",
         {"depth", "budget", "seed", "tolerance", "growth_threshold",
          "growth_lo", "growth_hi", "expected_verdict", "trials", "corrupt",
          "m_max", "validation_pairs"}},
    };

    Config cfg;
    std::string raw;
    int line_no = 0;
    bool schema_seen = false;
    ConfigSection* current = nullptr;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = strip(raw);
      if (line.empty()) continue;
      if (!schema_seen) {
        if (line != "schema = 1")
          throw ConfigError("line " + std::to_string(line_no) +
                            ": expected 'schema = 1' first");
        schema_seen = true;
        continue;
      }
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("line " + std::to_string(line_no) +
                            ": unterminated section header");
        std::string name = line.substr(1, line.size() - 2);
        if (!kAllowed.count(name))
          throw ConfigError("line " + std::to_string(line_no) +
                            ": unknown section [" + name + "]");
        for (const ConfigSection& s : cfg.sections_)
          if (s.name == name)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": duplicate section [" + name + "]");
        cfg.sections_.push_back(ConfigSection{name, {}, line_no});
        current = &cfg.sections_.back();
        continue;
      }
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(line_no) +
                          ": expected 'key = value'");
      if (!current)
        throw ConfigError("line " + std::to_string(line_no) +
                          ": key outside any section");
      ConfigEntry entry;
      entry.key = strip(line.substr(0, eq));
      entry.value = strip(line.substr(eq + 1));
      entry.line = line_no;
      if (!kAllowed.at(current->name).count(entry.key))
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                          entry.key + "' in section [" + current->name + "]");
      if (current->find(entry.key))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                          entry.key + "'");
      if (entry.value.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" +
                          entry.key + "'");
      current->entries.push_back(std::move(entry));
    }
    if (!schema_seen) throw ConfigError("empty config; expected 'schema = 1'");
    return cfg;
  }

  static Config parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  const ConfigSection* section(const std::string& name) const {
    for (const ConfigSection& s : sections_)
      if (s.name == name) return &s;
    return nullptr;
  }

  const ConfigSection& required(const std::string& name) const {
    const ConfigSection* s = section(name);
    if (!s) throw ConfigError("missing section [" + name + "]");
    return *s;
  }

  // section.key = value lines in file order, echoed into reports
  std::vector<std::pair<std::string, std::string>> flattened() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const ConfigSection& s : sections_)
      for (const ConfigEntry& e : s.entries)
        out.emplace_back(s.name + "." + e.key, e.value);
    return out;
  }

 private:
  static std::string strip(std::string s) {
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
  }

  std::vector<ConfigSection> sections_;
};

// ---------------------------------------------------------------------------
// typed value readers

namespace detail {

inline std::string entry_where(const ConfigEntry& e) {
  return "'" + e.key + "' (line " + std::to_string(e.line) + ")";
}

inline long config_long(const ConfigEntry& e) {
  char* end = nullptr;
  long v = std::strtol(e.value.c_str(), &end, 10);
  if (!end || *end != '\0')
    throw ConfigError(entry_where(e) + ": expected an integer, got '" + e.value + "'");
  return v;
}

inline double config_double(const ConfigEntry& e) {
  char* end = nullptr;
  double v = std::strtod(e.value.c_str(), &end);
  if (!end || *end != '\0')
    throw ConfigError(entry_where(e) + ": expected a number, got '" + e.value + "'");
  return v;
}

inline bool config_bool(const ConfigEntry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ConfigError(entry_where(e) + ": expected true or false");
}

inline std::vector<std::string> config_words(const ConfigEntry& e) {
  std::vector<std::string> out;
  std::istringstream in(e.value);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

template <typename T, typename Reader>
T config_or(const ConfigSection* s, const std::string& key, T fallback, Reader read) {
  if (!s) return fallback;
  const ConfigEntry* e = s->find(key);
  return e ? static_cast<T>(read(*e)) : fallback;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// resolution into live objects

inline Group resolve_group(const Config& cfg, std::size_t budget) {
  const ConfigSection& fam = cfg.required("family");
  const ConfigEntry* kind = fam.find("kind");
  if (!kind) throw ConfigError("[family] needs a kind");

  if (kind->value == "finite_permutation") {
    const ConfigEntry* deg = fam.find("degree");
    const ConfigEntry* gens = fam.find("generators");
    if (!deg || !gens)
      throw ConfigError("finite_permutation needs degree and generators");
    std::vector<Element> generators;
    for (const std::string& w : detail::config_words(*gens))
      generators.push_back(detail::parse_cycles(w));
    return Group::finite_permutation(static_cast<int>(detail::config_long(*deg)),
                                     generators, budget);
  }
  if (kind->value == "restricted_power") {
    const ConfigEntry* base = fam.find("base");
    if (!base) throw ConfigError("restricted_power needs a base");
    BaseGroup bg = [&] {
      if (base->value == "heisenberg") {
        const ConfigEntry* p = fam.find("p");
        if (!p) throw ConfigError("heisenberg base needs p");
        return BaseGroup::heisenberg(static_cast<int>(detail::config_long(*p)));
      }
      if (base->value == "cyclic") {
        const ConfigEntry* n = fam.find("n");
        if (!n) throw ConfigError("cyclic base needs n");
        return BaseGroup::cyclic(static_cast<int>(detail::config_long(*n)));
      }
      if (base->value == "permutations") {
        const ConfigEntry* gens = fam.find("generators");
        if (!gens) throw ConfigError("permutation base needs generators");
        std::vector<Element> generators;
        for (const std::string& w : detail::config_words(*gens))
          generators.push_back(detail::parse_cycles(w));
        return BaseGroup::from_permutations(generators, budget);
      }
      throw ConfigError("unknown base '" + base->value + "'");
    }();
    IndexSet idx = IndexSet::Naturals;
    if (const ConfigEntry* e = fam.find("index_set")) {
      if (e->value == "naturals")
        idx = IndexSet::Naturals;
      else if (e->value == "integers")
        idx = IndexSet::Integers;
      else
        throw ConfigError(detail::entry_where(*e) + ": expected naturals or integers");
    }
    return Group::restricted_power(std::move(bg), idx);
  }
  if (kind->value == "lamplighter") return Group::lamplighter();
  if (kind->value == "finitary_symmetric") return Group::finitary_symmetric();
  throw ConfigError("unknown family kind '" + kind->value + "'");
}

inline Endo resolve_endo(const Config& cfg, const Group& g, std::uint64_t seed) {
  const ConfigSection* sec = cfg.section("endomorphism");
  if (!sec) return Endo::identity(g);
  const ConfigEntry* kind = sec->find("kind");
  if (!kind) throw ConfigError("[endomorphism] needs a kind");

  if (kind->value == "identity") return Endo::identity(g);
  if (kind->value == "shift_right") return Endo::shift_right(g, seed);
  if (kind->value == "shift_left_inverse") return Endo::shift_left_inverse(g, seed);
  if (kind->value == "inner") {
    const ConfigEntry* el = sec->find("element");
    if (!el) throw ConfigError("inner endomorphism needs an element");
    return Endo::inner(g, g.parse(el->value), seed);
  }
  if (kind->value == "coordinatewise_power") {
    const ConfigEntry* p = sec->find("power");
    if (!p) throw ConfigError("coordinatewise_power needs a power");
    return Endo::coordinatewise_power(g, detail::config_long(*p), seed);
  }
  if (kind->value == "finite_table") {
    const ConfigEntry* images = sec->find("images");
    if (!images) throw ConfigError("finite_table needs images");
    std::vector<std::pair<Element, Element>> pairs;
    for (const std::string& w : detail::config_words(*images)) {
      std::size_t arrow = w.find("->");
      if (arrow == std::string::npos)
        throw ConfigError(detail::entry_where(*images) +
                          ": images look like g->image");
      pairs.emplace_back(g.parse(w.substr(0, arrow)), g.parse(w.substr(arrow + 2)));
    }
    return Endo::finite_table(g, pairs, seed);
  }
  throw ConfigError("unknown endomorphism kind '" + kind->value + "'");
}

inline std::optional<SubgroupSpec> resolve_subgroup(const Config& cfg, const Group& g) {
  const ConfigSection* sec = cfg.section("subgroup");
  if (!sec) return std::nullopt;
  const ConfigEntry* name = sec->find("name");
  if (!name) throw ConfigError("[subgroup] needs a name");
  return named_spec(g, name->value);
}

inline std::vector<ExhaustionEntry> resolve_exhaustion(const Config& cfg,
                                                       const Group& g,
                                                       std::size_t budget) {
  const ConfigSection& sec = cfg.required("exhaustion");
  std::vector<ExhaustionEntry> out;
  if (const ConfigEntry* windows = sec.find("windows"))
    for (const std::string& w : detail::config_words(*windows)) {
      ConfigEntry fake{windows->key, w, windows->line};
      int width = static_cast<int>(detail::config_long(fake));
      out.push_back(
          ExhaustionEntry{"window" + w, window_subgroup(g, width, budget)});
    }
  if (const ConfigEntry* extra = sec.find("extra_set")) {
    std::vector<Element> elems;
    for (const std::string& w : detail::config_words(*extra))
      elems.push_back(g.parse(w));
    out.push_back(ExhaustionEntry{"extra", ElementSet(std::move(elems))});
  }
  if (out.empty()) throw ConfigError("[exhaustion] resolves to an empty chain");
  return out;
}

struct SetSpec {
  ElementSet set;
  int n_max = 8;  // trajectory length for the trajectory command
};

inline SetSpec resolve_set(const Config& cfg, const Group& g, std::size_t budget) {
  const ConfigSection& sec = cfg.required("set");
  const ConfigEntry* kind = sec.find("kind");
  if (!kind) throw ConfigError("[set] needs a kind");
  SetSpec out;
  if (kind->value == "window") {
    const ConfigEntry* w = sec.find("width");
    if (!w) throw ConfigError("window set needs a width");
    out.set = window_subgroup(g, static_cast<int>(detail::config_long(*w)), budget);
  } else if (kind->value == "elements") {
    const ConfigEntry* el = sec.find("elements");
    if (!el) throw ConfigError("elements set needs elements");
    std::vector<Element> elems;
    for (const std::string& w : detail::config_words(*el)) elems.push_back(g.parse(w));
    out.set = ElementSet(std::move(elems));
  } else {
    throw ConfigError("unknown set kind '" + kind->value + "'");
  }
  if (out.set.empty()) throw ConfigError("[set] resolves to an empty set");
  out.n_max = static_cast<int>(
      detail::config_or<long>(&sec, "n", 8, detail::config_long));
  if (out.n_max < 1) throw ConfigError("[set] n must be positive");
  return out;
}

struct RunSettings {
  ATOptions options;
  int trials = 500;
  bool corrupt = false;
  int m_max = 8;
  std::optional<Verdict> expected_verdict;
};

inline RunSettings resolve_run(const Config& cfg) {
  const ConfigSection* sec = cfg.section("run");
  RunSettings out;
  out.options.budget = default_budget();
  using detail::config_bool;
  using detail::config_double;
  using detail::config_long;
  out.options.depth =
      static_cast<int>(detail::config_or<long>(sec, "depth", 4, config_long));
  out.options.budget = detail::config_or<std::size_t>(
      sec, "budget", out.options.budget, config_long);
  out.options.seed = detail::config_or<std::uint64_t>(
      sec, "seed", kDefaultValidationSeed, config_long);
  out.options.tolerance =
      detail::config_or<double>(sec, "tolerance", 1e-9, config_double);
  out.options.growth_threshold =
      detail::config_or<double>(sec, "growth_threshold", 1.5, config_double);
  out.options.growth_lo =
      static_cast<int>(detail::config_or<long>(sec, "growth_lo", 5, config_long));
  out.options.growth_hi =
      static_cast<int>(detail::config_or<long>(sec, "growth_hi", 14, config_long));
  out.options.validation_pairs = static_cast<int>(detail::config_or<long>(
      sec, "validation_pairs", kDefaultValidationPairs, config_long));
  out.trials = static_cast<int>(detail::config_or<long>(sec, "trials", 500, config_long));
  out.corrupt = detail::config_or<bool>(sec, "corrupt", false, config_bool);
  out.m_max = static_cast<int>(detail::config_or<long>(sec, "m_max", 8, config_long));
  if (sec)
    if (const ConfigEntry* e = sec->find("expected_verdict"))
      out.expected_verdict = verdict_from_name(e->value);
  if (out.options.depth < 0 || out.options.depth > 20)
    throw ConfigError("[run] depth out of range");
  if (out.options.budget < 1) throw ConfigError("[run] budget must be positive");
  return out;
}

}  // namespace entropylab

// Config parsing with line diagnostics, resolution into live objects and the
// budget environment override.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "entropylab/entropylab.hpp"

using namespace entropylab;

namespace {

const char* kGood = R"(schema = 1
# flagship sanity instance
[family]
kind = restricted_power
base = heisenberg
p = 2
index_set = naturals

[endomorphism]
kind = shift_right

[subgroup]
name = derived

[exhaustion]
windows = 1 2

[run]
depth = 2
budget = 50000
seed = 99
expected_verdict = AdditiveExact
)";

}  // namespace

TEST_CASE("a complete config resolves into live objects", "[config]") {
  Config cfg = Config::parse_string(kGood);
  RunSettings run = resolve_run(cfg);
  REQUIRE(run.options.depth == 2);
  REQUIRE(run.options.budget == 50000);
  REQUIRE(run.options.seed == 99);
  REQUIRE(run.options.tolerance == 1e-9);
  REQUIRE(run.options.growth_lo == 5);
  REQUIRE(run.options.growth_hi == 14);
  REQUIRE(run.expected_verdict == Verdict::AdditiveExact);

  Group g = resolve_group(cfg, run.options.budget);
  REQUIRE(g.kind() == Group::Kind::RestrictedPower);
  REQUIRE(g.base().order() == 8);

  Endo phi = resolve_endo(cfg, g, run.options.seed);
  REQUIRE(g.format(phi.apply(g.parse("@0:1,0,0"))) == "@1:1,0,0");

  auto sub = resolve_subgroup(cfg, g);
  REQUIRE(sub.has_value());
  REQUIRE(sub->name == "derived");

  auto chain = resolve_exhaustion(cfg, g, run.options.budget);
  REQUIRE(chain.size() == 2);
  REQUIRE(chain[0].label == "window1");
  REQUIRE(chain[0].set.size() == 8);
  REQUIRE(chain[1].set.size() == 64);

  // echoed provenance keeps file order
  auto flat = cfg.flattened();
  REQUIRE(flat.front().first == "family.kind");
  REQUIRE(flat.front().second == "restricted_power");
}

TEST_CASE("parse errors carry line numbers", "[config]") {
  auto fails = [](const std::string& text, const std::string& needle) {
    try {
      Config::parse_string(text);
      FAIL("expected a ConfigError for: " << text);
    } catch (const ConfigError& e) {
      REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring(needle));
    }
  };
  fails("", "schema");
  fails("[family]\nkind = lamplighter\n", "schema");
  fails("schema = 2\n", "schema = 1");
  fails("schema = 1\n[nonsense]\n", "line 2: unknown section");
  fails("schema = 1\n[family]\ncolour = blue\n", "line 3: unknown key");
  fails("schema = 1\n[family]\nkind = a\nkind = b\n", "line 4: duplicate key");
  fails("schema = 1\n[family]\n[family]\n", "duplicate section");
  fails("schema = 1\nkind = lamplighter\n", "outside any section");
  fails("schema = 1\n[family]\nkind =\n", "empty value");
  fails("schema = 1\n[family]\nkind\n", "expected 'key = value'");
  fails("schema = 1\n[family\n", "unterminated");
}

TEST_CASE("comments and spacing are ignored", "[config]") {
  Config cfg = Config::parse_string(
      "schema = 1\n\n  # leading comment\n[family]   # trailing\n"
      "  kind =   lamplighter  # another\n");
  REQUIRE(cfg.required("family").find("kind")->value == "lamplighter");
}

TEST_CASE("every family kind resolves", "[config]") {
  auto group_of = [](const std::string& body) {
    Config cfg = Config::parse_string("schema = 1\n" + body);
    return resolve_group(cfg, 10000);
  };
  REQUIRE(group_of("[family]\nkind = lamplighter\n").kind() ==
          Group::Kind::Lamplighter);
  REQUIRE(group_of("[family]\nkind = finitary_symmetric\n").kind() ==
          Group::Kind::FinitarySymmetric);
  REQUIRE(group_of("[family]\nkind = finite_permutation\ndegree = 3\n"
                   "generators = (1,2) (1,2,3)\n")
              .elements()
              .size() == 6);
  Group rp = group_of(
      "[family]\nkind = restricted_power\nbase = cyclic\nn = 4\n"
      "index_set = integers\n");
  REQUIRE(rp.index_set() == IndexSet::Integers);
  REQUIRE(group_of("[family]\nkind = restricted_power\nbase = permutations\n"
                   "generators = (1,2,3,4) (1,3)\n")
              .base()
              .order() == 8);
  REQUIRE_THROWS_AS(group_of("[family]\nkind = klein_bottle\n"), ConfigError);
  REQUIRE_THROWS_AS(group_of("[family]\nkind = restricted_power\nbase = fancy\n"),
                    ConfigError);
  REQUIRE_THROWS_AS(
      group_of("[family]\nkind = restricted_power\nbase = cyclic\nn = 4\n"
               "index_set = reals\n"),
      ConfigError);
}

TEST_CASE("every endomorphism kind resolves", "[config]") {
  auto endo_of = [](const std::string& fam, const std::string& endo) {
    Config cfg = Config::parse_string("schema = 1\n" + fam + endo);
    Group g = resolve_group(cfg, 10000);
    return resolve_endo(cfg, g, 1);
  };
  std::string lamp = "[family]\nkind = lamplighter\n";
  REQUIRE(endo_of(lamp, "").describe() == "identity");
  REQUIRE_FALSE(endo_of(lamp, "[endomorphism]\nkind = shift_right\n")
                    .describe()
                    .empty());
  REQUIRE_FALSE(endo_of(lamp, "[endomorphism]\nkind = shift_left_inverse\n")
                    .describe()
                    .empty());
  REQUIRE_FALSE(
      endo_of(lamp, "[endomorphism]\nkind = inner\nelement = a@0*t\n")
          .describe()
          .empty());
  std::string rp4 = "[family]\nkind = restricted_power\nbase = cyclic\nn = 4\n";
  REQUIRE_FALSE(
      endo_of(rp4, "[endomorphism]\nkind = coordinatewise_power\npower = 3\n")
          .describe()
          .empty());
  std::string c4 =
      "[family]\nkind = finite_permutation\ndegree = 4\ngenerators = (1,2,3,4)\n";
  Endo table = endo_of(
      c4, "[endomorphism]\nkind = finite_table\nimages = (1,2,3,4)->(1,3)(2,4)\n");
  REQUIRE_FALSE(table.is_automorphism());
  REQUIRE_THROWS_AS(endo_of(lamp, "[endomorphism]\nkind = transmogrify\n"),
                    ConfigError);
  REQUIRE_THROWS_AS(endo_of(lamp, "[endomorphism]\nkind = inner\n"), ConfigError);
  REQUIRE_THROWS_AS(
      endo_of(c4, "[endomorphism]\nkind = finite_table\nimages = (1,2,3,4)\n"),
      ConfigError);
}

TEST_CASE("exhaustions need at least one entry", "[config]") {
  Config cfg = Config::parse_string(
      "schema = 1\n[family]\nkind = lamplighter\n[exhaustion]\nwindows = 1 2\n"
      "extra_set = a@0 t t^-1\n");
  Group g = resolve_group(cfg, 10000);
  auto chain = resolve_exhaustion(cfg, g, 10000);
  REQUIRE(chain.size() == 3);
  REQUIRE(chain[2].label == "extra");
  REQUIRE(chain[2].set.size() == 3);

  Config empty = Config::parse_string(
      "schema = 1\n[family]\nkind = lamplighter\n[exhaustion]\n");
  REQUIRE_THROWS_AS(resolve_exhaustion(empty, g, 10000), ConfigError);
  Config missing =
      Config::parse_string("schema = 1\n[family]\nkind = lamplighter\n");
  REQUIRE_THROWS_AS(resolve_exhaustion(missing, g, 10000), ConfigError);
}

TEST_CASE("sets resolve from windows or literals", "[config]") {
  Config cfg = Config::parse_string(
      "schema = 1\n[family]\nkind = restricted_power\nbase = cyclic\nn = 2\n"
      "[set]\nkind = window\nwidth = 2\nn = 12\n");
  Group g = resolve_group(cfg, 10000);
  SetSpec s = resolve_set(cfg, g, 10000);
  REQUIRE(s.set.size() == 4);
  REQUIRE(s.n_max == 12);

  Config lit = Config::parse_string(
      "schema = 1\n[family]\nkind = restricted_power\nbase = cyclic\nn = 2\n"
      "[set]\nkind = elements\nelements = 1 @0:1 @3:1\n");
  REQUIRE(resolve_set(lit, g, 10000).set.size() == 3);

  Config bad = Config::parse_string(
      "schema = 1\n[family]\nkind = lamplighter\n[set]\nkind = fancy\n");
  REQUIRE_THROWS_AS(resolve_set(bad, Group::lamplighter(), 10000), ConfigError);
}

TEST_CASE("run settings fall back to defaults", "[config]") {
  Config cfg = Config::parse_string("schema = 1\n[family]\nkind = lamplighter\n");
  RunSettings run = resolve_run(cfg);
  REQUIRE(run.options.depth == 4);
  REQUIRE(run.options.tolerance == 1e-9);
  REQUIRE(run.options.growth_threshold == 1.5);
  REQUIRE(run.options.seed == kDefaultValidationSeed);
  REQUIRE(run.trials == 500);
  REQUIRE_FALSE(run.corrupt);
  REQUIRE(run.m_max == 8);
  REQUIRE_FALSE(run.expected_verdict.has_value());

  Config deep = Config::parse_string("schema = 1\n[run]\ndepth = 25\n");
  REQUIRE_THROWS_AS(resolve_run(deep), ConfigError);
  Config badv =
      Config::parse_string("schema = 1\n[run]\nexpected_verdict = Sure\n");
  REQUIRE_THROWS_AS(resolve_run(badv), ConfigError);
}

TEST_CASE("the budget environment variable is a fallback", "[config]") {
  // resolve_run without a [run] budget uses default_budget(), which reads
  // the environment once per call
  REQUIRE(setenv("ENTROPYLAB_BUDGET", "12345", 1) == 0);
  REQUIRE(default_budget() == 12345);
  Config cfg = Config::parse_string("schema = 1\n[family]\nkind = lamplighter\n");
  REQUIRE(resolve_run(cfg).options.budget == 12345);
  // an explicit config value wins over the environment
  Config explicit_budget =
      Config::parse_string("schema = 1\n[run]\nbudget = 777\n");
  REQUIRE(resolve_run(explicit_budget).options.budget == 777);
  REQUIRE(unsetenv("ENTROPYLAB_BUDGET") == 0);
  REQUIRE(default_budget() == kDefaultBudget);
}

// Endomorphism construction, validation and application against the naive
// oracles, plus the restriction/conjugation plumbing.

#include <catch2/catch_amalgamated.hpp>

#include "entropylab/entropylab.hpp"
#include "oracles.hpp"

using namespace entropylab;

namespace {

Element cyc(const char* text) { return detail::parse_cycles(text); }

std::vector<Element> gens(std::initializer_list<const char*> cycles) {
  std::vector<Element> out;
  for (const char* c : cycles) out.push_back(cyc(c));
  return out;
}

}  // namespace

TEST_CASE("shift endomorphisms move coordinates", "[morphisms]") {
  Group rpn = Group::restricted_power(BaseGroup::heisenberg(2), IndexSet::Naturals);
  Endo shift = Endo::shift_right(rpn);
  REQUIRE(rpn.format(shift.apply(rpn.parse("@0:1,0,0*@2:0,0,1"))) ==
          "@1:1,0,0*@3:0,0,1");
  REQUIRE_FALSE(shift.is_automorphism());
  REQUIRE_THROWS_AS(shift.inverse(), NotAutomorphism);
  REQUIRE_THROWS_AS(Endo::shift_left_inverse(rpn), KindMismatch);

  Group rpz = Group::restricted_power(BaseGroup::cyclic(2), IndexSet::Integers);
  Endo right = Endo::shift_right(rpz);
  Endo left = Endo::shift_left_inverse(rpz);
  REQUIRE(right.is_automorphism());
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    Element e = rpz.random_element(rng);
    REQUIRE(left.apply(right.apply(e)) == e);
    REQUIRE(right.inverse().apply(right.apply(e)) == e);
  }

  Group fs = Group::finitary_symmetric();
  REQUIRE_THROWS_AS(Endo::shift_right(fs), KindMismatch);
}

TEST_CASE("inner endomorphisms conjugate like the dense oracle", "[morphisms]") {
  Group s4 = Group::finite_permutation(4, gens({"(1,2)", "(1,2,3,4)"}));
  Element h = cyc("(1,2,3)");
  Endo phi = Endo::inner(s4, h);
  oracle::DPerm dh = oracle::dperm_from_element(h, 4);
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    Element x = s4.random_element(rng);
    oracle::DPerm want = oracle::dperm_mul(
        oracle::dperm_mul(dh, oracle::dperm_from_element(x, 4)),
        oracle::dperm_inv(dh));
    REQUIRE(phi.apply(x) == oracle::element_from_dperm(want));
  }
  REQUIRE(phi.is_automorphism());
  for (int i = 0; i < 20; ++i) {
    Element x = s4.random_element(rng);
    REQUIRE(phi.inverse().apply(phi.apply(x)) == x);
  }
}

TEST_CASE("coordinatewise powers respect the base exponent", "[morphisms]") {
  Group rp = Group::restricted_power(BaseGroup::cyclic(4), IndexSet::Naturals);
  Endo cube = Endo::coordinatewise_power(rp, 3);
  REQUIRE(rp.format(cube.apply(rp.parse("@0:1*@1:2"))) == "@0:3*@1:2");
  REQUIRE(cube.is_automorphism());
  Endo square = Endo::coordinatewise_power(rp, 2);
  REQUIRE(rp.format(square.apply(rp.parse("@0:1"))) == "@0:2");
  REQUIRE_FALSE(square.is_automorphism());
  REQUIRE_THROWS_AS(square.inverse(), NotAutomorphism);

  Group nonab = Group::restricted_power(BaseGroup::heisenberg(2), IndexSet::Naturals);
  REQUIRE_THROWS_AS(Endo::coordinatewise_power(nonab, 2), NotHomomorphism);
}

TEST_CASE("finite tables extend consistently or not at all", "[morphisms]") {
  Group s3 = Group::finite_permutation(3, gens({"(1,2)", "(1,2,3)"}));
  // sending a transposition to a 3-cycle cannot extend to a homomorphism
  REQUIRE_THROWS_AS(
      Endo::finite_table(s3, {{cyc("(1,2)"), cyc("(1,2,3)")},
                              {cyc("(1,2,3)"), cyc("(1,2,3)")}}),
      NotHomomorphism);

  // squaring on C4: a well-defined endomorphism that collapses the group
  Group c4 = Group::finite_permutation(4, gens({"(1,2,3,4)"}));
  Endo sq = Endo::finite_table(c4, {{cyc("(1,2,3,4)"), cyc("(1,3)(2,4)")}});
  REQUIRE(sq.apply(cyc("(1,3)(2,4)")) == c4.identity());
  REQUIRE_FALSE(sq.is_automorphism());

  // conjugation by (2,3) written as a table is an automorphism of S3
  Endo conj = Endo::finite_table(
      s3, {{cyc("(1,2)"), cyc("(1,3)")}, {cyc("(1,2,3)"), cyc("(1,3,2)")}});
  REQUIRE(conj.is_automorphism());
  Endo manual = Endo::inner(s3, cyc("(2,3)"));
  for (const Element& e : s3.elements()) REQUIRE(conj.apply(e) == manual.apply(e));
  Endo back = conj.inverse();
  for (const Element& e : s3.elements()) REQUIRE(back.apply(conj.apply(e)) == e);

  REQUIRE_THROWS_AS(Endo::finite_table(s3, {{cyc("(1,2)"), cyc("(1,3)")}}),
                    ConfigError);  // one transposition does not generate S3
}

TEST_CASE("restriction enforces membership and invariance", "[morphisms]") {
  Group s4 = Group::finite_permutation(4, gens({"(1,2)", "(1,2,3,4)"}));
  Rng rng(23);
  Endo id4 = Endo::identity(s4);
  Endo on_alt = id4.restricted(derived_spec(s4), rng);
  REQUIRE(on_alt.apply(cyc("(1,2,3)")) == cyc("(1,2,3)"));
  REQUIRE_THROWS_AS(on_alt.apply(cyc("(1,2)")), MalformedElement);

  SubgroupSpec flip = finite_subgroup_spec(
      s4, subgroup_closure(s4, ElementSet({cyc("(1,3)")})), "flip13");
  Endo swap = Endo::inner(s4, cyc("(1,2)"));
  REQUIRE_THROWS_AS(swap.restricted(flip, rng), NotInvariant);
}

TEST_CASE("conjugated endomorphisms act through the conjugator", "[morphisms]") {
  Group lamp = Group::lamplighter();
  Endo shift = Endo::shift_right(lamp);
  // the shift is conjugation by the cursor step
  Endo by_t = Endo::inner(lamp, lamp.parse("t"));
  Rng rng(29);
  for (int i = 0; i < 100; ++i) {
    Element e = lamp.random_element(rng);
    REQUIRE(shift.apply(e) == by_t.apply(e));
  }

  Endo toggle0 = Endo::inner(lamp, lamp.parse("a@0"));
  Endo moved = toggle0.conjugated(shift);
  Endo toggle1 = Endo::inner(lamp, lamp.parse("a@1"));
  for (int i = 0; i < 100; ++i) {
    Element e = lamp.random_element(rng);
    REQUIRE(moved.apply(e) == toggle1.apply(e));
  }

  Group s4 = Group::finite_permutation(4, gens({"(1,2)", "(1,2,3,4)"}));
  Endo not_auto = Endo::identity(s4);
  Group c4 = Group::finite_permutation(4, gens({"(1,2,3,4)"}));
  Endo collapse =
      Endo::finite_table(c4, {{cyc("(1,2,3,4)"), cyc("(1,3)(2,4)")}});
  REQUIRE_THROWS_AS(not_auto.conjugated(collapse), KindMismatch);
  REQUIRE_THROWS_AS(Endo::identity(c4).conjugated(collapse), NotAutomorphism);
}

TEST_CASE("composition chains apply right to left", "[morphisms]") {
  Group rp = Group::restricted_power(BaseGroup::heisenberg(2), IndexSet::Naturals);
  Endo shift = Endo::shift_right(rp);
  Endo twice = Endo::compose({shift, shift});
  REQUIRE(rp.format(twice.apply(rp.parse("@0:1,1,1"))) == "@2:1,1,1");
  REQUIRE_THROWS_AS(Endo::compose({}), ConfigError);
  Group lamp = Group::lamplighter();
  REQUIRE_THROWS_AS(Endo::compose({shift, Endo::identity(lamp)}), KindMismatch);
  REQUIRE_FALSE(twice.describe().empty());
}

#include <catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/universal.hpp"
#include "support/util.hpp"

using namespace tracecat;
using namespace tracecat::testing;

namespace {

std::vector<std::string> names(const SaturationResult& r) { return r.space.states(); }

SpaceMorphism random_morphism(Rng& rng, const StateSpace& x, const StateSpace& y) {
  auto all = all_space_morphisms(x, y, BasicHom::identity(x.monoid()));
  return all[uniform(rng, 0, all.size() - 1)];
}

// Class of the term g·w in r, or kStar.
StateId class_of(const SaturationResult& r, const Term& t) {
  StateId s = r.class_map.at(t.generator);
  return r.space.act_word(s, t.trace);
}

// Diagrams over one monoid whose arrows all have identity monoid parts.
SpaceDiagram identity_diagram(Rng& rng, int kind) {
  TraceMonoid m = random_monoid(rng, 3, 2);
  StateSpace x = random_space(rng, m, 4, 0.6, "x");
  StateSpace y = random_space(rng, m, 4, 0.6, "y");
  if (kind == 0) return {shapes::parallel_pair(), {x, y}, {random_morphism(rng, x, y), random_morphism(rng, x, y)}};
  StateSpace z = random_space(rng, m, 3, 0.6, "z");
  return {shapes::span(), {z, x, y}, {random_morphism(rng, z, x), random_morphism(rng, z, y)}};
}

std::vector<std::pair<std::size_t, std::size_t>> arrow_pairs(const SpaceDiagram& d) {
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (const auto& o : d.objects) {
    offset.push_back(total);
    total += o.size();
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
    for (StateId x = 0; x < d.objects[i].size(); ++x) {
      const StateId y = d.arrows[k](x);
      pairs.emplace_back(offset[i] + x, y == kStar ? total : offset[j] + y);
    }
  }
  return pairs;
}

std::vector<SpaceMorphism> all_morphisms(const StateSpace& s, const StateSpace& t, Category c) {
  std::vector<SpaceMorphism> out;
  for (const auto& h : all_homs(s.monoid(), t.monoid(), c))
    for (auto& m : all_space_morphisms(s, t, h)) out.push_back(std::move(m));
  return out;
}

/// Cocones from d into t, each checked for a unique mediator out of c.
std::size_t space_colimit_failures(const SpaceDiagram& d, const SpaceColimit& c, const StateSpace& t, Category cat,
                                   std::size_t& cocones) {
  std::size_t failures = 0;
  for (const auto& leg : c.legs)
    if (!arrow_diagnostics(leg, cat).empty()) ++failures;
  for (std::size_t k = 0; k < d.arrows.size(); ++k)
    if (!(compose(c.legs[d.shape.target_index(k)], d.arrows[k]) == c.legs[d.shape.source_index(k)])) ++failures;
  std::vector<std::vector<SpaceMorphism>> options;
  for (const auto& o : d.objects) options.push_back(all_morphisms(o, t, cat));
  const auto mediators = all_morphisms(c.saturation.space, t, cat);
  std::vector<const SpaceMorphism*> legs(d.objects.size());
  auto rec = [&](auto& self, std::size_t i) -> void {
    if (i == legs.size()) {
      for (std::size_t k = 0; k < d.arrows.size(); ++k)
        if (!(compose(*legs[d.shape.target_index(k)], d.arrows[k]) == *legs[d.shape.source_index(k)])) return;
      ++cocones;
      std::size_t n = 0;
      const SpaceMorphism* found = nullptr;
      for (const auto& m : mediators) {
        bool ok = true;
        for (std::size_t j = 0; j < legs.size() && ok; ++j) ok = compose(m, c.legs[j]) == *legs[j];
        if (ok) {
          ++n;
          found = &m;
        }
      }
      failures += n != 1;
      if (n == 1) {
        std::vector<SpaceMorphism> given;
        for (const auto* l : legs) given.push_back(*l);
        auto f = factor_through_colimit(c, t, given);
        failures += !f || !(*f == *found);
      }
      return;
    }
    for (const auto& m : options[i]) {
      legs[i] = &m;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return failures;
}

}  // namespace

TEST_CASE("saturation examples", "[saturation]") {
  TraceMonoid e = monoid({"e"}, {});
  PresentedAction free{e, {"g"}, {}, {}};
  SaturationResult r = saturate(free, 2);
  CHECK(r.status == SaturationStatus::truncated);
  CHECK(names(r) == std::vector<std::string>{"g", "g.e", "g.e.e"});
  REQUIRE(r.frontier.size() == 1);
  CHECK(render_term(free, r.frontier.front()) == "g.e.e.e");
  CHECK(saturate(free, 0).space.size() == 1);

  PresentedAction loop{e, {"g"}, {{0, 0, 0}}, {}};
  SaturationResult l = saturate(loop, 0);
  CHECK(l.status == SaturationStatus::exact);
  CHECK(l.space.size() == 1);
  CHECK(l.space.act(0, 0) == 0);

  PresentedAction killed{e, {"g"}, {}, {{Term{0, {}}, Term{kStar, {}}}}};
  SaturationResult k = saturate(killed, 3);
  CHECK(k.status == SaturationStatus::exact);
  CHECK(k.space.size() == 0);
  CHECK(k.class_map == std::vector<StateId>{kStar});

  // g·e·e = g closes a two cycle once the bound reaches it
  PresentedAction cycle{e, {"g"}, {}, {{Term{0, {0, 0}}, Term{0, {}}}}};
  CHECK(saturate(cycle, 1).status == SaturationStatus::truncated);
  SaturationResult c = saturate(cycle, 2);
  CHECK(c.status == SaturationStatus::exact);
  CHECK(names(c) == std::vector<std::string>{"g", "g.e"});

  PresentedAction wrong{e, {"g"}, {{0, 3, 0}}, {}};
  CHECK_THROWS_MATCHES(saturate(wrong, 1), Error, HasCode(ErrorCode::invalid_space));
}

TEST_CASE("saturation respects the diamond", "[saturation]") {
  TraceMonoid ab = monoid({"a", "b"}, {{"a", "b"}});
  PresentedAction p{ab, {"g"}, {}, {{Term{0, {0}}, Term{0, {}}}, {Term{0, {1}}, Term{0, {}}}}};
  SaturationResult r = saturate(p, 2);
  CHECK(r.status == SaturationStatus::exact);
  CHECK(r.space.size() == 1);
  CHECK(validate_space(r.space).empty());

  PresentedAction open{ab, {"g"}, {}, {}};
  SaturationResult grid = saturate(open, 2);
  CHECK(grid.status == SaturationStatus::truncated);
  CHECK(grid.space.size() == 6);  // a^i b^j with i + j <= 2
  CHECK(class_of(grid, Term{0, {0, 1}}) == class_of(grid, Term{0, {1, 0}}));
}

TEST_CASE("one-object colimits", "[saturation]") {
  TraceMonoid ab = monoid({"a", "b"}, {});
  StateSpace x(ab, {"p", "q"}, {1, kStar, 0, 1});
  SpaceDiagram one{shapes::discrete(1), {x}, {}};
  for (Category c : {Category::fpcm, Category::fpcm_par}) {
    SpaceColimit col = colimit(one, c, 2);
    REQUIRE(col.saturation.status == SaturationStatus::exact);
    CHECK(is_isomorphic(col.saturation.space, x).has_value());
    CHECK(col.saturation.space.states() == std::vector<std::string>{"0:p", "0:q"});
    REQUIRE(col.legs.size() == 1);
    CHECK(validate_morphism(col.legs.front()).empty());
  }
}

TEST_CASE("free extension along a coproduct is infinite", "[saturation]") {
  TraceMonoid e1 = monoid({"e1"}, {});
  TraceMonoid e2 = monoid({"e2"}, {});
  StateSpace x1(e1, {"x"}, {0});
  StateSpace x2(e2, {"y"}, {0});
  SpaceDiagram d{shapes::discrete(2), {x1, x2}, {}};
  for (std::size_t bound : {1u, 2u, 3u, 4u}) {
    SpaceColimit c = colimit(d, Category::fpcm, bound);
    CHECK(c.saturation.status == SaturationStatus::truncated);
    CHECK(c.legs.empty());
    const EventId f1 = c.presentation.monoid.id("0:e1"), f2 = c.presentation.monoid.id("1:e2");
    std::set<StateId> chain1, chain2;
    Word w1, w2;
    for (std::size_t k = 0; k <= bound; ++k) {
      chain1.insert(class_of(c.saturation, Term{0, w1}));
      chain2.insert(class_of(c.saturation, Term{1, w2}));
      w1.push_back(f2);
      w2.push_back(f1);
    }
    CHECK(chain1.size() == bound + 1);
    CHECK(chain2.size() == bound + 1);
    CHECK_FALSE(chain1.contains(kStar));
    // the old loop survives
    CHECK(class_of(c.saturation, Term{0, {f1}}) == c.saturation.class_map[0]);
  }
}

TEST_CASE("colimits with identity monoid parts are congruence quotients", "[saturation][property]") {
  Rng rng(31);
  std::size_t compared = 0;
  for (int round = 0; round < 150; ++round) {
    SpaceDiagram d = identity_diagram(rng, round % 2);
    SpaceColimit c = colimit(d, Category::fpcm, 4);
    REQUIRE(c.saturation.status == SaturationStatus::exact);
    REQUIRE(validate_space(c.saturation.space).empty());
    std::vector<const StateSpace*> spaces;
    for (const auto& o : d.objects) spaces.push_back(&o);
    auto oracle = congruence_closure(spaces, arrow_pairs(d));
    REQUIRE(same_partition(c.saturation.class_map, oracle));
    // no state outside the generator classes
    std::set<StateId> hit(c.saturation.class_map.begin(), c.saturation.class_map.end());
    hit.erase(kStar);
    REQUIRE(hit.size() == c.saturation.space.size());
    for (const auto& leg : c.legs) REQUIRE(validate_morphism(leg).empty());
    ++compared;
  }
  CHECK(compared >= 100);
}

TEST_CASE("saturation is monotone in the bound", "[saturation][property]") {
  Rng rng(37);
  for (int round = 0; round < 80; ++round) {
    TraceMonoid m1 = random_monoid(rng, 2, 1, "a");
    TraceMonoid m2 = random_monoid(rng, 2, 1, "b");
    SpaceDiagram d{shapes::discrete(2), {random_space(rng, m1, 2), random_space(rng, m2, 2, 0.5, "y")}, {}};
    std::optional<SaturationResult> prev;
    for (std::size_t bound = 0; bound <= 4; ++bound) {
      SaturationResult cur = colimit(d, Category::fpcm, bound).saturation;
      if (prev) {
        // settled transitions persist, and the representatives keep their classes apart from merges
        const auto& p = *prev;
        auto phi = [&](StateId s) { return s == kStar ? kStar : class_of(cur, p.representatives[s]); };
        for (StateId g = 0; g < p.class_map.size(); ++g) REQUIRE(phi(p.class_map[g]) == cur.class_map[g]);
        for (StateId s = 0; s < p.space.size(); ++s)
          for (EventId e = 0; e < p.space.monoid().size(); ++e) {
            const StateId t = p.space.act(s, e);
            Word w = p.representatives[s].trace;
            w.push_back(e);
            const bool pending = std::binary_search(p.frontier.begin(), p.frontier.end(),
                                                    Term{p.representatives[s].generator,
                                                         detail::lex_normal_form(p.space.monoid(), w)},
                                                    term_less);
            if (t != kStar || !pending) REQUIRE(cur.space.act(phi(s), e) == phi(t));
          }
        if (p.status == SaturationStatus::exact) {
          REQUIRE(cur.status == SaturationStatus::exact);
          REQUIRE(cur.space == p.space);
        }
        REQUIRE(cur.space.size() >= p.space.size());
      }
      prev = std::move(cur);
    }
  }
}

TEST_CASE("exact colimits are universal", "[saturation][property]") {
  Rng rng(41);
  std::size_t cocones = 0, checked = 0;
  for (int round = 0; round < 60; ++round) {
    const Category c = round % 2 ? Category::fpcm_par : Category::fpcm;
    TraceMonoid m = random_monoid(rng, 2, 1);
    StateSpace x = random_space(rng, m, 2, 0.7, "x");
    StateSpace y = random_space(rng, m, 2, 0.7, "y");
    SpaceDiagram d{shapes::parallel_pair(), {x, y}, {random_morphism(rng, x, y), random_morphism(rng, x, y)}};
    SpaceColimit col = colimit(d, c, 3);
    if (col.saturation.status != SaturationStatus::exact) continue;
    ++checked;
    StateSpace t = random_space(rng, random_monoid(rng, 2, 1, "t"), 2, 0.6, "t");
    REQUIRE(space_colimit_failures(d, col, t, c, cocones) == 0);
  }
  CHECK(checked > 20);
  CHECK(cocones > 0);
}

TEST_CASE("quotient of a cycle", "[saturation]") {
  TraceMonoid t = monoid({"t"}, {});
  StateSpace cycle(t, {"c0", "c1", "c2", "c3"}, {1, 2, 3, 0});
  SpaceMorphism shift(cycle, cycle, BasicHom::identity(t), {2, 3, 0, 1});
  REQUIRE(validate_morphism(shift).empty());
  SpaceDiagram d{shapes::parallel_pair(), {cycle, cycle}, {shift, SpaceMorphism::identity(cycle)}};
  SpaceColimit c = colimit(d, Category::fpcm, 2);
  REQUIRE(c.saturation.status == SaturationStatus::exact);
  CHECK(c.saturation.space.size() == 2);
  CHECK(c.saturation.space.states() == std::vector<std::string>{"0:c0", "0:c1"});
  std::size_t cocones = 0;
  CHECK(space_colimit_failures(d, c, StateSpace(t, {"u", "v"}, {1, 0}), Category::fpcm, cocones) == 0);
  CHECK(cocones > 0);
}

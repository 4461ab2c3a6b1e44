#include <catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/util.hpp"

using namespace tracecat;
using namespace tracecat::testing;

namespace {

WeakAsyncSystem system(const TraceMonoid& m, std::vector<std::string> states, const std::string& initial,
                       const std::vector<std::tuple<std::string, std::string, std::string>>& steps) {
  WeakAsyncSystem blank(m, states, kStar, {});
  std::vector<Transition> tr;
  for (const auto& [x, e, y] : steps) tr.push_back({*blank.find_state(x), m.id(e), *blank.find_state(y)});
  return WeakAsyncSystem(m, std::move(states), *blank.find_state(initial), std::move(tr));
}

// p0 -a-> p1 over one event
WeakAsyncSystem line() { return system(monoid({"a"}, {}), {"p0", "p1"}, "p0", {{"p0", "a", "p1"}}); }

// s -a-> u -b-> w, s -b-> v -a-> w with a, b independent
WeakAsyncSystem square() {
  return system(monoid({"a", "b"}, {{"a", "b"}}), {"s", "u", "v", "w"}, "s",
                {{"s", "a", "u"}, {"s", "b", "v"}, {"u", "b", "w"}, {"v", "a", "w"}});
}

}  // namespace

TEST_CASE("system validation", "[asys]") {
  CHECK(validate_system(square()).empty());
  CHECK(validate_system(WeakAsyncSystem()).empty());
  TraceMonoid ab = monoid({"a", "b"}, {{"a", "b"}});
  auto broken = system(ab, {"s", "u", "w"}, "s", {{"s", "a", "u"}, {"u", "b", "w"}});
  auto diags = validate_system(broken);
  REQUIRE(diags.size() == 1);
  CHECK(diags.front() == "diamond fails at s for a then b");
  auto nondet = system(ab, {"s", "u"}, "s", {{"s", "a", "u"}, {"s", "a", "s"}});
  CHECK(validate_system(nondet).front().starts_with("nondeterministic"));
  CHECK_THROWS_MATCHES(make_system(ab, {"s", "u", "w"}, 0, broken.transitions()), Error,
                       HasCode(ErrorCode::invalid_system));
  CHECK_THROWS_MATCHES(WeakAsyncSystem(ab, {"s"}, 3, {}), Error, HasCode(ErrorCode::unknown_state));
  CHECK_THROWS_MATCHES(WeakAsyncSystem(ab, {"s"}, 0, {{0, 5, 0}}), Error, HasCode(ErrorCode::unknown_event));
  CHECK_THROWS_MATCHES(WeakAsyncSystem(ab, {"s", "s"}, 0, {}), Error, HasCode(ErrorCode::invalid_system));
}

TEST_CASE("classification", "[asys]") {
  CHECK(classify(square()) == SystemClass::ats);
  CHECK(classify(WeakAsyncSystem()) == SystemClass::weak);
  TraceMonoid ab = monoid({"a", "b"}, {});
  CHECK(classify(system(ab, {"s"}, "s", {{"s", "a", "s"}})) == SystemClass::bednarczyk);
  CHECK(classify(system(ab, {"s"}, "*", {{"s", "a", "s"}, {"s", "b", "s"}})) == SystemClass::weak);
  CHECK(system_class_name(SystemClass::bednarczyk) == "BEDNARCZYK");
}

TEST_CASE("systems correspond to pointed spaces", "[asys]") {
  PointedSpace p = to_state_space(square());
  CHECK(p.initial == 0);
  CHECK(p.space.act(0, 0) == 1);
  CHECK(p.space.act(1, 0) == kStar);
  CHECK(from_state_space(p) == square());

  TraceMonoid ab = monoid({"a", "b"}, {{"a", "b"}});
  auto broken = system(ab, {"s", "u", "w"}, "s", {{"s", "a", "u"}, {"u", "b", "w"}});
  CHECK_THROWS_MATCHES(to_state_space(broken), Error, HasCode(ErrorCode::invalid_system));
  StateSpace bad(ab, {"x", "y"}, {1, 0, kStar, kStar});
  CHECK_THROWS_MATCHES(from_state_space(bad, 0), Error, HasCode(ErrorCode::invalid_space));
  CHECK_THROWS_MATCHES(from_state_space(p.space, 9), Error, HasCode(ErrorCode::unknown_state));

  Rng rng(43);
  for (int round = 0; round < 300; ++round) {
    WeakAsyncSystem a = random_system(rng, 6, 4, 4);
    REQUIRE(validate_system(a).empty());
    REQUIRE(from_state_space(to_state_space(a)) == a);
    PointedSpace q = to_state_space(a);
    REQUIRE(to_state_space(from_state_space(q)) == q);
  }
}

TEST_CASE("morphism conditions", "[asys]") {
  WeakAsyncSystem p = line();
  CHECK(is_morphism(SystemMorphism::identity(p)));
  CHECK(is_polygonal(SystemMorphism::identity(p)));

  SystemMorphism wrong_initial(p, p, {0}, {1, 1});
  auto v = morphism_violations(wrong_initial);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().condition == 1);

  SystemMorphism collapse(p, p, {kEmpty}, {0, 0});
  CHECK(is_morphism(collapse));
  SystemMorphism apart(p, p, {kEmpty}, {0, 1});
  CHECK(morphism_violations(apart).front().condition == 2);
  SystemMorphism lost(p, p, {0}, {0, kStar});
  CHECK(morphism_violations(lost).front().condition == 2);

  WeakAsyncSystem sq = square();
  TraceMonoid free2 = monoid({"a", "b"}, {});
  WeakAsyncSystem loops = system(free2, {"o"}, "o", {{"o", "a", "o"}, {"o", "b", "o"}});
  SystemMorphism dependent(sq, loops, {0, 1}, {0, 0, 0, 0});
  auto dv = morphism_violations(dependent);
  REQUIRE(dv.size() == 1);
  CHECK(dv.front().condition == 3);
  CHECK_THROWS_MATCHES(is_polygonal(dependent), Error, HasCode(ErrorCode::not_a_morphism));
  CHECK_FALSE(is_polygonal_by_equivariance(dependent));
  CHECK_THROWS_MATCHES(SystemMorphism(p, p, {0}, {0}), Error, HasCode(ErrorCode::not_a_morphism));

  // an undefined image endpoint is read as *
  WeakAsyncSystem cycle = system(monoid({"a"}, {}), {"c0", "c1"}, "c0", {{"c0", "a", "c1"}, {"c1", "a", "c0"}});
  WeakAsyncSystem lone = system(monoid({"a"}, {}), {"o"}, "*", {{"o", "a", "o"}});
  SystemMorphism nowhere(cycle, lone, {0}, {kStar, kStar});
  CHECK(is_morphism(nowhere));
  CHECK(is_polygonal(nowhere));
  CHECK(is_polygonal_by_equivariance(nowhere));
  SystemMorphism half(cycle, lone, {0}, {kStar, 0});
  CHECK(morphism_violations(half).front().condition == 2);
  WeakAsyncSystem stop = system(monoid({"a"}, {}), {"o"}, "o", {});
  SystemMorphism blocked(p, stop, {0}, {0, kStar});
  CHECK(is_morphism(blocked));
  CHECK(is_polygonal(blocked));
}

TEST_CASE("a morphism that is not polygonal", "[asys]") {
  WeakAsyncSystem one = system(monoid({"a"}, {}), {"q"}, "q", {});
  SystemMorphism m(one, line(), {0}, {0});
  CHECK(is_morphism(m));
  CHECK_FALSE(is_polygonal(m));
  CHECK_FALSE(is_polygonal_by_equivariance(m));

  // an erased event the source cannot perform breaks equivariance too
  SystemMorphism erased(one, line(), {kEmpty}, {0});
  CHECK(is_morphism(erased));
  CHECK_FALSE(is_polygonal(erased));
  CHECK_FALSE(is_polygonal_by_equivariance(erased));
}

TEST_CASE("polygonal criterion agrees with equivariance", "[asys][property]") {
  Rng rng(47);
  std::size_t polygonal = 0, agreed = 0;
  for (int round = 0; round < 400; ++round) {
    WeakAsyncSystem target = random_system(rng, 4, 3, 3, 0.7);
    SystemMorphism m = random_system_morphism(rng, target, 4, 3, round % 3 ? 0.95 : 0.5);
    REQUIRE(validate_system(m.source()).empty());
    if (!is_morphism(m)) continue;
    const bool crit = is_polygonal(m);
    REQUIRE(crit == is_polygonal_by_equivariance(m));
    polygonal += crit;
    ++agreed;
  }
  CHECK(agreed >= 200);
  CHECK(polygonal > 20);
  CHECK(agreed - polygonal > 20);
}

TEST_CASE("composition of system morphisms", "[asys]") {
  WeakAsyncSystem p = line();
  SystemMorphism id = SystemMorphism::identity(p);
  CHECK(compose(id, id) == id);
  WeakAsyncSystem dot = system(monoid({"a"}, {}), {"d"}, "d", {{"d", "a", "d"}});
  SystemMorphism to_dot(p, dot, {0}, {0, 0});
  SystemMorphism erase(dot, dot, {kEmpty}, {0});
  CHECK(is_morphism(to_dot));
  SystemMorphism c = compose(erase, to_dot);
  CHECK(c.events() == std::vector<EventId>{kEmpty});
  CHECK(is_morphism(c));
}

TEST_CASE("products of systems", "[asys]") {
  WeakAsyncSystem p = line();
  WeakAsyncSystem q = system(monoid({"b"}, {}), {"q0", "q1"}, "q0", {{"q0", "b", "q1"}});
  std::vector<WeakAsyncSystem> two{p, q};
  SystemCone c = product(two);
  CHECK(c.apex.initial() == *c.apex.find_state("(p0,q0)"));
  CHECK(c.apex.size() == 8);
  CHECK(validate_system(c.apex).empty());
  for (const auto& leg : c.legs) {
    CHECK(is_morphism(leg));
    CHECK(is_polygonal(leg));
  }
  SystemCone f = product(two, Category::fpcm);
  CHECK(f.apex.monoid().independent_pairs().size() == 3);

  Rng rng(53);
  for (int round = 0; round < 100; ++round) {
    std::vector<WeakAsyncSystem> pair{random_system(rng, 3, 2, 1), random_system(rng, 3, 2, 1, 0.5, "t")};
    const Category cat = round % 2 ? Category::fpcm : Category::fpcm_par;
    SystemCone r = product(pair, cat);
    REQUIRE(validate_system(r.apex).empty());
    // condition 3 makes every system morphism independence preserving
    if (cat == Category::fpcm_par)
      for (const auto& leg : r.legs) REQUIRE(arrow_diagnostics(leg, cat).empty());
  }
}

TEST_CASE("limits of systems", "[asys]") {
  WeakAsyncSystem p = line();
  SystemDiagram loop{{{"A"}, {{"id", "A", "A"}}}, {p}, {SystemMorphism::identity(p)}};
  SystemCone l = limit(loop);
  CHECK(l.apex.size() == 2);
  CHECK(is_isomorphic(to_state_space(l.apex).space, to_state_space(p).space).has_value());
  CHECK(l.apex.initial() == *l.apex.find_state("(p0)"));
  SystemDiagram bad{{{"A"}, {{"x", "A", "A"}}}, {p}, {SystemMorphism(p, p, {0}, {1, 1})}};
  CHECK_THROWS_MATCHES(limit(bad), Error, HasCode(ErrorCode::malformed_diagram));
}

TEST_CASE("colimits of systems glue the initial states", "[asys]") {
  WeakAsyncSystem p = line();
  WeakAsyncSystem q = system(monoid({"b"}, {}), {"q0", "q1"}, "q0", {{"q0", "b", "q1"}});
  SystemDiagram d{shapes::discrete(2), {p, q}, {}};
  for (Category cat : {Category::fpcm, Category::fpcm_par}) {
    SystemColimit c = colimit(d, cat, 3);
    const auto& sc = c.space_colimit;
    const StateId i0 = sc.saturation.class_map[sc.offsets[0] + p.initial()];
    const StateId i1 = sc.saturation.class_map[sc.offsets[1] + q.initial()];
    CHECK(i0 != kStar);
    CHECK(i0 == i1);
    CHECK(c.apex.initial() == i0);
    CHECK(c.status() == SaturationStatus::truncated);
    CHECK(c.legs.empty());
  }

  // over a shared event the gluing closes up
  WeakAsyncSystem p2 = system(monoid({"a"}, {}), {"r0", "r1"}, "r0", {{"r0", "a", "r1"}});
  SystemMorphism iso(p, p2, {0}, {0, 1});
  SystemDiagram glued{shapes::parallel_pair(), {p, p2}, {iso, iso}};
  SystemColimit g = colimit(glued, Category::fpcm_par, 3);
  REQUIRE(g.status() == SaturationStatus::exact);
  CHECK(g.apex.size() == 2);
  CHECK(g.apex.initial() == 0);
  REQUIRE(g.legs.size() == 2);
  for (const auto& leg : g.legs) CHECK(arrow_diagnostics(leg, Category::fpcm_par).empty());

  WeakAsyncSystem weak = system(monoid({"a"}, {}), {"w"}, "*", {{"w", "a", "w"}});
  SystemDiagram with_weak{shapes::discrete(2), {p, weak}, {}};
  CHECK(colimit(with_weak, Category::fpcm, 1).apex.initial() == kStar);
}

TEST_CASE("reachability and unfolding", "[asys]") {
  TraceMonoid ab = monoid({"a", "b"}, {{"a", "b"}});
  WeakAsyncSystem sq = square();
  CHECK(reachable(sq) == sq);
  auto with_dead = system(ab, {"s", "dead", "u"}, "s", {{"s", "a", "u"}, {"dead", "b", "dead"}});
  WeakAsyncSystem r = reachable(with_dead);
  CHECK(r.states() == std::vector<std::string>{"s", "u"});
  CHECK(validate_system(r).empty());
  CHECK(reachable(system(ab, {"x"}, "*", {})).size() == 0);

  auto runs = unfold(sq, 3);
  std::vector<std::string> words;
  for (const auto& [t, s] : runs) words.push_back(t.str() + "@" + sq.state_name(s));
  CHECK(words == std::vector<std::string>{"1@s", "a@u", "b@v", "ab@w"});
  CHECK(unfold(sq, 0).size() == 1);
  CHECK(unfold(system(ab, {"x"}, "*", {}), 2).empty());
}

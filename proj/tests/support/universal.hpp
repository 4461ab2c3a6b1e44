#pragma once

// Exhaustive (co)cone enumeration and mediator counting.

#include <functional>
#include <string>
#include <vector>

#include "support/generators.hpp"

namespace tracecat::testing {

inline EventId apply_event(const BasicHom& h, EventId e) { return e == kEmpty ? kEmpty : h(e); }

/// Calls visit for every family (h_i : T -> D(i)) with D(α)∘h_i = h_j.
inline void for_each_cone(const MonoidDiagram& d, const TraceMonoid& t, Category c,
                          const std::function<void(const std::vector<BasicHom>&)>& visit) {
  const std::size_t n = d.objects.size();
  std::vector<std::vector<BasicHom>> homs;
  for (const auto& o : d.objects) homs.push_back(all_homs(t, o, c));
  std::vector<BasicHom> legs(n);
  auto compatible = [&](std::size_t upto) {
    for (std::size_t k = 0; k < d.arrows.size(); ++k) {
      const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
      if (i > upto || j > upto) continue;
      for (EventId e = 0; e < t.size(); ++e)
        if (apply_event(d.arrows[k], legs[i](e)) != legs[j](e)) return false;
    }
    return true;
  };
  auto rec = [&](auto& self, std::size_t i) -> void {
    if (i == n) {
      visit(legs);
      return;
    }
    for (const auto& h : homs[i]) {
      legs[i] = h;
      if (compatible(i)) self(self, i + 1);
    }
  };
  rec(rec, 0);
}

/// Calls visit for every family (h_i : D(i) -> T) with h_j∘D(α) = h_i.
inline void for_each_cocone(const MonoidDiagram& d, const TraceMonoid& t, Category c,
                            const std::function<void(const std::vector<BasicHom>&)>& visit) {
  const std::size_t n = d.objects.size();
  std::vector<std::vector<BasicHom>> homs;
  for (const auto& o : d.objects) homs.push_back(all_homs(o, t, c));
  std::vector<BasicHom> legs(n);
  auto compatible = [&](std::size_t upto) {
    for (std::size_t k = 0; k < d.arrows.size(); ++k) {
      const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
      if (i > upto || j > upto) continue;
      for (EventId e = 0; e < d.objects[i].size(); ++e)
        if (apply_event(legs[j], d.arrows[k](e)) != legs[i](e)) return false;
    }
    return true;
  };
  auto rec = [&](auto& self, std::size_t i) -> void {
    if (i == n) {
      visit(legs);
      return;
    }
    for (const auto& h : homs[i]) {
      legs[i] = h;
      if (compatible(i)) self(self, i + 1);
    }
  };
  rec(rec, 0);
}

/// Number of admissible k : T -> apex with leg_i∘k = h_i.
inline std::size_t count_limit_mediators(const MonoidCone& cone, const TraceMonoid& t, const std::vector<BasicHom>& h,
                                         Category c) {
  std::vector<std::vector<EventId>> candidates(t.size());
  for (EventId x = 0; x < t.size(); ++x) {
    for (EventId p = 0; p <= cone.apex.size(); ++p) {
      const EventId y = p == cone.apex.size() ? kEmpty : p;
      bool ok = true;
      for (std::size_t i = 0; i < h.size() && ok; ++i) ok = apply_event(cone.legs[i], y) == h[i](x);
      if (ok) candidates[x].push_back(y);
    }
  }
  std::size_t count = 0;
  for_each_hom(t, cone.apex, c, candidates, [&](const BasicHom&) { ++count; });
  return count;
}

/// Number of admissible k : apex -> T with k∘q_i = h_i.
inline std::size_t count_colimit_mediators(const MonoidCocone& cocone, const TraceMonoid& t,
                                           const std::vector<BasicHom>& h, Category c) {
  std::vector<std::vector<EventId>> candidates(cocone.apex.size());
  for (EventId y = 0; y < cocone.apex.size(); ++y) {
    for (EventId p = 0; p <= t.size(); ++p) candidates[y].push_back(p == t.size() ? kEmpty : p);
  }
  for (std::size_t i = 0; i < h.size(); ++i)
    for (EventId e = 0; e < cocone.legs[i].source().size(); ++e) {
      const EventId q = cocone.legs[i](e);
      if (q == kEmpty) {
        if (h[i](e) != kEmpty) return 0;
        continue;
      }
      std::erase_if(candidates[q], [&](EventId z) { return z != h[i](e); });
    }
  std::size_t count = 0;
  for_each_hom(cocone.apex, t, c, candidates, [&](const BasicHom&) { ++count; });
  return count;
}

struct UniversalReport {
  std::size_t test_cones = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
};

/// Checks that the cone commutes, its legs are admissible, and every
/// test cone from T factors uniquely.
inline UniversalReport check_limit(const MonoidDiagram& d, const MonoidCone& cone, const TraceMonoid& t, Category c) {
  UniversalReport r;
  for (const auto& l : cone.legs)
    if (!admissible(l, c)) r.fail("leg not admissible");
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
    if (!(compose(d.arrows[k], cone.legs[i]) == cone.legs[j])) r.fail("cone does not commute");
  }
  for_each_cone(d, t, c, [&](const std::vector<BasicHom>& h) {
    ++r.test_cones;
    const std::size_t n = count_limit_mediators(cone, t, h, c);
    if (n != 1) r.fail(std::to_string(n) + " mediators");
  });
  return r;
}

inline UniversalReport check_colimit(const MonoidDiagram& d, const MonoidCocone& cocone, const TraceMonoid& t,
                                     Category c) {
  UniversalReport r;
  for (const auto& l : cocone.legs)
    if (!admissible(l, c)) r.fail("leg not admissible");
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
    if (!(compose(cocone.legs[j], d.arrows[k]) == cocone.legs[i])) r.fail("cocone does not commute");
  }
  for_each_cocone(d, t, c, [&](const std::vector<BasicHom>& h) {
    ++r.test_cones;
    const std::size_t n = count_colimit_mediators(cocone, t, h, c);
    if (n != 1) r.fail(std::to_string(n) + " mediators");
  });
  return r;
}

// ---------------------------------------------------------------------------
// Random diagrams

inline MonoidDiagram discrete_diagram(const std::vector<TraceMonoid>& objects) {
  return {shapes::discrete(objects.size()), objects, {}};
}

inline MonoidDiagram parallel_diagram(const BasicHom& f, const BasicHom& g) {
  return {shapes::parallel_pair(), {f.source(), f.target()}, {f, g}};
}

/// The full cone over a parallel pair from an equalizer leg e.
inline MonoidCone pair_cone(const BasicHom& f, const MonoidCone& eq) {
  return {eq.apex, {eq.legs.front(), compose(f, eq.legs.front())}};
}

/// The full cocone under a parallel pair from a coequalizer leg q.
inline MonoidCocone pair_cocone(const BasicHom& f, const MonoidCocone& q) {
  return {q.apex, {compose(q.legs.front(), f), q.legs.front()}};
}

/// A span or cospan of random admissible homs between random monoids.
inline MonoidDiagram random_span(Rng& rng, Category c, bool co, std::size_t max_events, std::size_t max_pairs) {
  TraceMonoid apex = random_monoid(rng, max_events, max_pairs, "p");
  TraceMonoid left = random_monoid(rng, max_events, max_pairs, "l");
  TraceMonoid right = random_monoid(rng, max_events, max_pairs, "r");
  if (!co) {
    return {shapes::span(), {apex, left, right}, {random_hom(rng, apex, left, c), random_hom(rng, apex, right, c)}};
  }
  return {shapes::cospan(), {left, right, apex}, {random_hom(rng, left, apex, c), random_hom(rng, right, apex, c)}};
}

}  // namespace tracecat::testing

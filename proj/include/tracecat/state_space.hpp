#pragma once

// State spaces: a trace monoid acting on a pointed set whose basepoint `*`
// is an absorbing "undefined" state. Morphisms pair a basic homomorphism
// with an equivariant pointed map. Limits are computed pointwise over the
// limit of the monoids.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracecat/diagram.hpp"
#include "tracecat/error.hpp"
#include "tracecat/monoid_category.hpp"
#include "tracecat/trace.hpp"

namespace tracecat {

using StateId = std::uint32_t;

/// The basepoint of every state space.
inline constexpr StateId kStar = std::numeric_limits<StateId>::max();

class StateSpace {
 public:
  /// The one-point space over the trivial monoid.
  StateSpace() = default;

  /// `action[x * |E| + e]` is x·e, a proper state index or kStar.
  StateSpace(TraceMonoid monoid, std::vector<std::string> states, std::vector<StateId> action)
      : monoid_(std::move(monoid)), states_(std::move(states)), action_(std::move(action)) {
    if (action_.size() != states_.size() * monoid_.size())
      throw Error(ErrorCode::invalid_space, "action table does not match states x events");
    for (StateId& y : action_)
      if (y != kStar && y >= states_.size()) throw Error(ErrorCode::unknown_state, "action leaves the state set");
    for (StateId x = 0; x < states_.size(); ++x) {
      TraceMonoid::validate_name(states_[x]);
      if (!index_.emplace(states_[x], x).second)
        throw Error(ErrorCode::invalid_space, "state '" + states_[x] + "' declared twice");
    }
  }

  const TraceMonoid& monoid() const { return monoid_; }
  const std::vector<std::string>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<StateId>& action() const { return action_; }

  std::string state_name(StateId x) const { return x == kStar ? std::string("*") : states_.at(x); }

  std::optional<StateId> find_state(std::string_view name) const {
    if (name == "*") return kStar;
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// x·e; kEmpty acts as the identity.
  StateId act(StateId x, EventId e) const {
    if (x == kStar) return kStar;
    if (e == kEmpty) return x;
    return action_[static_cast<std::size_t>(x) * monoid_.size() + e];
  }

  StateId act_word(StateId x, std::span<const EventId> w) const {
    for (EventId e : w) x = act(x, e);
    return x;
  }

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.states_ == b.states_ && a.action_ == b.action_ && a.monoid_ == b.monoid_;
  }

 private:
  TraceMonoid monoid_;
  std::vector<std::string> states_;
  std::vector<StateId> action_;
  std::unordered_map<std::string, StateId> index_;
};

/// Left-to-right fold of the action along the normal form of t.
inline StateId act_trace(const StateSpace& s, StateId x, const Trace& t) {
  if (!(t.monoid() == s.monoid())) throw Error(ErrorCode::monoid_mismatch, "trace is not over the acting monoid");
  if (x != kStar && x >= s.size()) throw Error(ErrorCode::unknown_state, "no such state");
  return s.act_word(x, t.word());
}

struct DiamondViolation {
  StateId state;
  EventId first;
  EventId second;

  friend bool operator==(const DiamondViolation&, const DiamondViolation&) = default;
};

/// Every (x, a, b) with (a, b) independent and (x·a)·b ≠ (x·b)·a. Each
/// unordered pair is reported once, with a < b.
inline std::vector<DiamondViolation> validate_space(const StateSpace& s) {
  std::vector<DiamondViolation> out;
  const auto pairs = s.monoid().independent_pairs();
  for (StateId x = 0; x < s.size(); ++x)
    for (auto [a, b] : pairs)
      if (s.act(s.act(x, a), b) != s.act(s.act(x, b), a)) out.push_back({x, a, b});
  return out;
}

inline std::string describe(const StateSpace& s, const DiamondViolation& v) {
  return "diamond fails at " + s.state_name(v.state) + " for (" + s.monoid().name(v.first) + "," +
         s.monoid().name(v.second) + ")";
}

// ---------------------------------------------------------------------------

class SpaceMorphism {
 public:
  SpaceMorphism() = default;

  /// Shape checks only; see validate_morphism for the equivariance check.
  SpaceMorphism(StateSpace source, StateSpace target, BasicHom monoid_part, std::vector<StateId> state_part)
      : source_(std::move(source)),
        target_(std::move(target)),
        monoid_part_(std::move(monoid_part)),
        state_part_(std::move(state_part)) {
    if (!(monoid_part_.source() == source_.monoid()) || !(monoid_part_.target() == target_.monoid()))
      throw Error(ErrorCode::monoid_mismatch, "monoid part does not match the spaces");
    if (state_part_.size() != source_.size()) throw Error(ErrorCode::invalid_space, "state map must be total");
    for (StateId y : state_part_)
      if (y != kStar && y >= target_.size()) throw Error(ErrorCode::unknown_state, "state map leaves the target");
  }

  static SpaceMorphism identity(const StateSpace& s) {
    std::vector<StateId> ids(s.size());
    for (StateId x = 0; x < s.size(); ++x) ids[x] = x;
    return SpaceMorphism(s, s, BasicHom::identity(s.monoid()), std::move(ids));
  }

  const StateSpace& source() const { return source_; }
  const StateSpace& target() const { return target_; }
  const BasicHom& monoid_part() const { return monoid_part_; }
  const std::vector<StateId>& state_part() const { return state_part_; }

  StateId operator()(StateId x) const { return x == kStar ? kStar : state_part_.at(x); }

  friend bool operator==(const SpaceMorphism&, const SpaceMorphism&) = default;

 private:
  StateSpace source_;
  StateSpace target_;
  BasicHom monoid_part_;
  std::vector<StateId> state_part_;
};

struct EquivarianceViolation {
  StateId state;
  EventId event;

  friend bool operator==(const EquivarianceViolation&, const EquivarianceViolation&) = default;
};

/// Every (x, e) with σ(x·e) ≠ σ(x)·η(e).
inline std::vector<EquivarianceViolation> equivariance_violations(const SpaceMorphism& m) {
  std::vector<EquivarianceViolation> out;
  const auto& src = m.source();
  for (StateId x = 0; x < src.size(); ++x)
    for (EventId e = 0; e < src.monoid().size(); ++e)
      if (m(src.act(x, e)) != m.target().act(m(x), m.monoid_part()(e))) out.push_back({x, e});
  return out;
}

inline std::vector<std::string> validate_morphism(const SpaceMorphism& m) {
  std::vector<std::string> out;
  for (auto [a, b] : m.monoid_part().violations())
    out.push_back("monoid part breaks independent pair (" + m.source().monoid().name(a) + "," +
                  m.source().monoid().name(b) + ")");
  for (auto v : equivariance_violations(m))
    out.push_back("not equivariant at (" + m.source().state_name(v.state) + "," +
                  m.source().monoid().name(v.event) + ")");
  return out;
}

/// n2 ∘ n1.
inline SpaceMorphism compose(const SpaceMorphism& n2, const SpaceMorphism& n1) {
  if (!(n1.target() == n2.source())) throw Error(ErrorCode::monoid_mismatch, "morphisms are not composable");
  std::vector<StateId> states(n1.source().size());
  for (StateId x = 0; x < states.size(); ++x) states[x] = n2(n1(x));
  return SpaceMorphism(n1.source(), n2.target(), compose(n2.monoid_part(), n1.monoid_part()), std::move(states));
}

inline const StateSpace& arrow_source(const SpaceMorphism& m) { return m.source(); }
inline const StateSpace& arrow_target(const SpaceMorphism& m) { return m.target(); }

inline std::vector<std::string> arrow_diagnostics(const SpaceMorphism& m, Category c) {
  auto out = validate_morphism(m);
  if (c == Category::fpcm_par && !is_independence_preserving(m.monoid_part()))
    out.push_back("monoid part is not independence preserving");
  return out;
}

using SpaceDiagram = Diagram<StateSpace, SpaceMorphism>;

struct SpaceCone {
  StateSpace apex;
  std::vector<SpaceMorphism> legs;
};

// ---------------------------------------------------------------------------
// Limits

inline constexpr std::size_t kMaxActionTable = std::size_t{1} << 24;

/// Cartesian product of the pointed state sets over the monoid product.
/// Only (*,…,*) is the basepoint; other tuples may have star coordinates. A
/// product generator acts coordinatewise, a star coordinate acting as 1.
inline SpaceCone product(std::span<const StateSpace> factors, Category category) {
  std::vector<TraceMonoid> monoids;
  for (const auto& f : factors) monoids.push_back(f.monoid());
  MonoidCone mp = product(monoids, category);

  std::vector<std::size_t> stride(factors.size() + 1, 1);
  for (std::size_t j = 0; j < factors.size(); ++j) {
    stride[j + 1] = stride[j] * (factors[j].size() + 1);
    if (stride[j + 1] * std::max<std::size_t>(mp.apex.size(), 1) > kMaxActionTable)
      throw Error(ErrorCode::size_limit, "product state space too large");
  }
  const std::size_t total = stride.back();
  auto coord = [&](std::size_t code, std::size_t j) -> StateId {
    const std::size_t d = (code / stride[j]) % (factors[j].size() + 1);
    return d == 0 ? kStar : static_cast<StateId>(d - 1);
  };
  auto encode = [&](std::span<const StateId> xs) -> StateId {
    std::size_t code = 0;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (xs[j] != kStar) code += (xs[j] + 1) * stride[j];
    return code == 0 ? kStar : static_cast<StateId>(code - 1);
  };

  std::vector<std::string> names;
  for (std::size_t code = 1; code < total; ++code) {
    std::string name = "(";
    for (std::size_t j = 0; j < factors.size(); ++j) name += (j ? "," : "") + factors[j].state_name(coord(code, j));
    names.push_back(name + ")");
  }
  const std::size_t events = mp.apex.size();
  std::vector<StateId> action((total - 1) * events);
  std::vector<StateId> xs(factors.size());
  for (std::size_t code = 1; code < total; ++code) {
    for (EventId g = 0; g < events; ++g) {
      for (std::size_t j = 0; j < factors.size(); ++j) xs[j] = factors[j].act(coord(code, j), mp.legs[j](g));
      action[(code - 1) * events + g] = encode(xs);
    }
  }
  SpaceCone cone{StateSpace(mp.apex, std::move(names), std::move(action)), {}};
  for (std::size_t j = 0; j < factors.size(); ++j) {
    std::vector<StateId> proj(total - 1);
    for (std::size_t code = 1; code < total; ++code) proj[code - 1] = coord(code, j);
    cone.legs.emplace_back(cone.apex, factors[j], mp.legs[j], std::move(proj));
  }
  return cone;
}

/// The morphism into a product induced by one leg per factor.
inline SpaceMorphism tuple(const StateSpace& source, const SpaceCone& prod, std::span<const SpaceMorphism> legs,
                           Category category) {
  std::vector<TraceMonoid> monoids;
  std::vector<BasicHom> monoid_legs;
  for (std::size_t j = 0; j < legs.size(); ++j) {
    monoids.push_back(prod.legs[j].target().monoid());
    monoid_legs.push_back(legs[j].monoid_part());
  }
  MonoidCone mp = product(monoids, category);
  BasicHom eta = tuple(source.monoid(), mp, monoid_legs);
  std::vector<std::size_t> stride(legs.size(), 1);
  for (std::size_t j = 1; j < legs.size(); ++j) stride[j] = stride[j - 1] * (prod.legs[j - 1].target().size() + 1);
  std::vector<StateId> states(source.size());
  for (StateId x = 0; x < source.size(); ++x) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < legs.size(); ++j)
      if (StateId y = legs[j](x); y != kStar) code += (y + 1) * stride[j];
    states[x] = code == 0 ? kStar : static_cast<StateId>(code - 1);
  }
  return SpaceMorphism(source, prod.apex, BasicHom::unchecked(source.monoid(), prod.apex.monoid(), eta.image()),
                       std::move(states));
}

/// States on which both morphisms agree, acted on by the equalizer of the
/// monoid parts.
inline SpaceCone equalizer(const SpaceMorphism& m1, const SpaceMorphism& m2, Category category) {
  if (!(m1.source() == m2.source()) || !(m1.target() == m2.target()))
    throw Error(ErrorCode::not_parallel, "morphisms do not share source and target");
  for (const auto* m : {&m1, &m2}) {
    auto diags = arrow_diagnostics(*m, category);
    if (!diags.empty()) throw Error(ErrorCode::not_a_morphism, diags.front());
  }
  MonoidCone eq = equalizer(m1.monoid_part(), m2.monoid_part(), category);
  const BasicHom& inc = eq.legs.front();
  const StateSpace& src = m1.source();
  std::vector<StateId> kept, position(src.size(), kStar);
  for (StateId x = 0; x < src.size(); ++x)
    if (m1(x) == m2(x)) {
      position[x] = static_cast<StateId>(kept.size());
      kept.push_back(x);
    }
  std::vector<std::string> names;
  for (StateId x : kept) names.push_back(src.state_name(x));
  std::vector<StateId> action(kept.size() * eq.apex.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (EventId e = 0; e < eq.apex.size(); ++e) {
      const StateId y = src.act(kept[i], inc(e));
      if (y != kStar && position[y] == kStar) throw Error(ErrorCode::not_a_morphism, "equalizer is not closed");
      action[i * eq.apex.size() + e] = y == kStar ? kStar : position[y];
    }
  SpaceCone cone{StateSpace(eq.apex, std::move(names), std::move(action)), {}};
  cone.legs.emplace_back(cone.apex, src, inc, kept);
  return cone;
}

/// Equalizer of the two canonical maps between products, as for monoids.
inline SpaceCone limit(const SpaceDiagram& d, Category category) {
  require_valid(d, category);
  SpaceCone objects = product(d.objects, category);
  std::vector<StateSpace> codomains;
  std::vector<SpaceMorphism> sides, actions;
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
    codomains.push_back(d.objects[j]);
    sides.push_back(objects.legs[j]);
    actions.push_back(compose(d.arrows[k], objects.legs[i]));
  }
  SpaceCone arrows = product(codomains, category);
  SpaceCone eq = equalizer(tuple(objects.apex, arrows, sides, category),
                           tuple(objects.apex, arrows, actions, category), category);
  SpaceCone cone{eq.apex, {}};
  for (const auto& leg : objects.legs) cone.legs.push_back(compose(leg, eq.legs.front()));
  return cone;
}

// ---------------------------------------------------------------------------
// Isomorphism

struct SpaceIsomorphism {
  std::vector<EventId> events;
  std::vector<StateId> states;
};

inline constexpr std::size_t kMaxIsoEvents = 8;
inline constexpr std::size_t kMaxIsoStates = 12;

/// Searches for an independence preserving event bijection together with
/// a pointed state bijection commuting with the actions.
inline std::optional<SpaceIsomorphism> is_isomorphic(const StateSpace& s1, const StateSpace& s2) {
  if (s1.monoid().size() > kMaxIsoEvents || s2.monoid().size() > kMaxIsoEvents || s1.size() > kMaxIsoStates ||
      s2.size() > kMaxIsoStates)
    throw Error(ErrorCode::size_limit, "isomorphism search limited to 8 events and 12 states");
  if (s1.size() != s2.size()) return std::nullopt;
  const std::size_t n = s1.size();
  std::optional<SpaceIsomorphism> found;
  for_each_monoid_isomorphism(s1.monoid(), s2.monoid(), [&](const std::vector<EventId>& ev) {
    std::vector<StateId> map(n, kStar), inverse(n, kStar);
    auto consistent = [&](StateId x) {
      for (EventId e = 0; e < ev.size(); ++e) {
        const StateId y1 = s1.act(x, e), y2 = s2.act(map[x], ev[e]);
        if ((y1 == kStar) != (y2 == kStar)) return false;
        if (y1 == kStar) continue;
        if (map[y1] != kStar && map[y1] != y2) return false;
        if (inverse[y2] != kStar && inverse[y2] != y1) return false;
      }
      for (StateId z = 0; z < n; ++z) {
        if (map[z] == kStar) continue;
        for (EventId e = 0; e < ev.size(); ++e)
          if (s1.act(z, e) == x && s2.act(map[z], ev[e]) != map[x]) return false;
      }
      return true;
    };
    auto search = [&](auto& self, StateId x) -> bool {
      if (x == n) return true;
      for (StateId c = 0; c < n; ++c) {
        if (inverse[c] != kStar) continue;
        map[x] = c;
        inverse[c] = x;
        if (consistent(x) && self(self, x + 1)) return true;
        map[x] = kStar;
        inverse[c] = kStar;
      }
      return false;
    };
    if (!search(search, 0)) return false;
    found = SpaceIsomorphism{ev, map};
    return true;
  });
  return found;
}

}  // namespace tracecat

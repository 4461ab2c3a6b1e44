#pragma once

// Weak asynchronous systems (S, s0, E, I, Tran), their correspondence with
// pointed state spaces, morphisms and the polygonal ones, and limits and
// colimits of systems computed through state spaces under a point.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tracecat/diagram.hpp"
#include "tracecat/error.hpp"
#include "tracecat/saturation.hpp"
#include "tracecat/state_space.hpp"
#include "tracecat/trace.hpp"

namespace tracecat {

struct Transition {
  StateId from;
  EventId event;
  StateId to;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

enum class SystemClass { weak, bednarczyk, ats };

constexpr std::string_view system_class_name(SystemClass c) {
  switch (c) {
    case SystemClass::weak: return "WEAK";
    case SystemClass::bednarczyk: return "BEDNARCZYK";
    case SystemClass::ats: return "ATS";
  }
  return "WEAK";
}

class WeakAsyncSystem {
 public:
  /// S = ∅, s0 = *, E = ∅.
  WeakAsyncSystem() = default;

  /// Resolves indices and sorts the transitions. Determinism and the
  /// diamond axiom are checked by validate_system, not here.
  WeakAsyncSystem(TraceMonoid monoid, std::vector<std::string> states, StateId initial,
                  std::vector<Transition> transitions)
      : monoid_(std::move(monoid)), states_(std::move(states)), initial_(initial), transitions_(std::move(transitions)) {
    std::set<std::string> seen;
    for (const auto& s : states_) {
      TraceMonoid::validate_name(s);
      if (!seen.insert(s).second) throw Error(ErrorCode::invalid_system, "state '" + s + "' declared twice");
    }
    if (initial_ != kStar && initial_ >= states_.size()) throw Error(ErrorCode::unknown_state, "unknown initial state");
    for (const auto& t : transitions_) {
      if (t.from >= states_.size() || t.to >= states_.size())
        throw Error(ErrorCode::unknown_state, "transition refers to an unknown state");
      if (t.event >= monoid_.size()) throw Error(ErrorCode::unknown_event, "transition refers to an unknown event");
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  }

  const TraceMonoid& monoid() const { return monoid_; }
  const std::vector<std::string>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  StateId initial() const { return initial_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  std::string state_name(StateId x) const { return x == kStar ? std::string("*") : states_.at(x); }

  std::optional<StateId> find_state(std::string_view name) const {
    if (name == "*") return kStar;
    for (StateId x = 0; x < states_.size(); ++x)
      if (states_[x] == name) return x;
    return std::nullopt;
  }

  /// The unique e-successor of s, or kStar. Assumes determinism.
  StateId step(StateId s, EventId e) const {
    if (s == kStar || e == kEmpty) return s;
    auto it = std::lower_bound(transitions_.begin(), transitions_.end(), Transition{s, e, 0});
    return it != transitions_.end() && it->from == s && it->event == e ? it->to : kStar;
  }

  bool has_transition(StateId s, EventId e, StateId t) const {
    return std::binary_search(transitions_.begin(), transitions_.end(), Transition{s, e, t});
  }

  friend bool operator==(const WeakAsyncSystem& a, const WeakAsyncSystem& b) {
    return a.states_ == b.states_ && a.initial_ == b.initial_ && a.transitions_ == b.transitions_ &&
           a.monoid_ == b.monoid_;
  }

 private:
  TraceMonoid monoid_;
  std::vector<std::string> states_;
  StateId initial_ = kStar;
  std::vector<Transition> transitions_;
};

/// Determinism and diamond violations, one message each.
inline std::vector<std::string> validate_system(const WeakAsyncSystem& a) {
  std::vector<std::string> out;
  const auto& tr = a.transitions();
  for (std::size_t k = 1; k < tr.size(); ++k)
    if (tr[k - 1].from == tr[k].from && tr[k - 1].event == tr[k].event)
      out.push_back("nondeterministic: " + a.state_name(tr[k].from) + " has two " + a.monoid().name(tr[k].event) +
                    "-successors");
  if (!out.empty()) return out;
  const auto& m = a.monoid();
  for (const auto& t1 : tr)
    for (EventId b = 0; b < m.size(); ++b) {
      if (!m.independent(t1.event, b)) continue;
      const StateId s2 = a.step(t1.to, b);
      if (s2 == kStar) continue;
      const StateId s1 = a.step(t1.from, b);
      if (s1 == kStar || a.step(s1, t1.event) != s2)
        out.push_back("diamond fails at " + a.state_name(t1.from) + " for " + m.name(t1.event) + " then " + m.name(b));
    }
  return out;
}

inline WeakAsyncSystem make_system(TraceMonoid monoid, std::vector<std::string> states, StateId initial,
                                   std::vector<Transition> transitions) {
  WeakAsyncSystem a(std::move(monoid), std::move(states), initial, std::move(transitions));
  auto diags = validate_system(a);
  if (!diags.empty()) throw Error(ErrorCode::invalid_system, diags.front());
  return a;
}

inline SystemClass classify(const WeakAsyncSystem& a) {
  if (a.initial() == kStar || a.size() == 0) return SystemClass::weak;
  std::vector<bool> used(a.monoid().size(), false);
  for (const auto& t : a.transitions()) used[t.event] = true;
  return std::all_of(used.begin(), used.end(), [](bool b) { return b; }) ? SystemClass::ats
                                                                         : SystemClass::bednarczyk;
}

// ---------------------------------------------------------------------------
// Correspondence with pointed state spaces

struct PointedSpace {
  StateSpace space;
  StateId initial = kStar;

  friend bool operator==(const PointedSpace&, const PointedSpace&) = default;
};

namespace detail {

inline StateSpace action_of(const WeakAsyncSystem& a) {
  const std::size_t n = a.monoid().size();
  std::vector<StateId> action(a.size() * n, kStar);
  for (const auto& t : a.transitions()) action[t.from * n + t.event] = t.to;
  return StateSpace(a.monoid(), a.states(), std::move(action));
}

inline WeakAsyncSystem system_of(const StateSpace& s, StateId initial) {
  std::vector<Transition> tr;
  for (StateId x = 0; x < s.size(); ++x)
    for (EventId e = 0; e < s.monoid().size(); ++e)
      if (StateId y = s.act(x, e); y != kStar) tr.push_back({x, e, y});
  return WeakAsyncSystem(s.monoid(), s.states(), initial, std::move(tr));
}

}  // namespace detail

/// x·e = s' if (x, e, s') ∈ Tran, otherwise *.
inline PointedSpace to_state_space(const WeakAsyncSystem& a) {
  auto diags = validate_system(a);
  if (!diags.empty()) throw Error(ErrorCode::invalid_system, diags.front());
  return {detail::action_of(a), a.initial()};
}

/// Tran = {(s, e, s·e) | s·e ≠ *}.
inline WeakAsyncSystem from_state_space(const StateSpace& s, StateId initial) {
  if (initial != kStar && initial >= s.size()) throw Error(ErrorCode::unknown_state, "unknown initial state");
  auto diags = validate_space(s);
  if (!diags.empty()) throw Error(ErrorCode::invalid_space, describe(s, diags.front()));
  return detail::system_of(s, initial);
}

inline WeakAsyncSystem from_state_space(const PointedSpace& p) { return from_state_space(p.space, p.initial); }

// ---------------------------------------------------------------------------
// Morphisms

class SystemMorphism {
 public:
  SystemMorphism() = default;

  /// events: E -> E' ∪ {kEmpty}; states: S -> S' ∪ {kStar}.
  SystemMorphism(WeakAsyncSystem source, WeakAsyncSystem target, std::vector<EventId> events,
                 std::vector<StateId> states)
      : source_(std::move(source)), target_(std::move(target)), events_(std::move(events)), states_(std::move(states)) {
    if (events_.size() != source_.monoid().size() || states_.size() != source_.size())
      throw Error(ErrorCode::not_a_morphism, "event and state maps must be total (use * / 1 for undefined)");
    for (EventId e : events_)
      if (e != kEmpty && e >= target_.monoid().size()) throw Error(ErrorCode::unknown_event, "event map leaves target");
    for (StateId s : states_)
      if (s != kStar && s >= target_.size()) throw Error(ErrorCode::unknown_state, "state map leaves target");
  }

  static SystemMorphism identity(const WeakAsyncSystem& a) {
    std::vector<EventId> ev(a.monoid().size());
    for (EventId e = 0; e < ev.size(); ++e) ev[e] = e;
    std::vector<StateId> st(a.size());
    for (StateId s = 0; s < st.size(); ++s) st[s] = s;
    return SystemMorphism(a, a, std::move(ev), std::move(st));
  }

  const WeakAsyncSystem& source() const { return source_; }
  const WeakAsyncSystem& target() const { return target_; }
  const std::vector<EventId>& events() const { return events_; }
  const std::vector<StateId>& states() const { return states_; }

  EventId event(EventId e) const { return events_.at(e); }
  StateId operator()(StateId s) const { return s == kStar ? kStar : states_.at(s); }

  friend bool operator==(const SystemMorphism&, const SystemMorphism&) = default;

 private:
  WeakAsyncSystem source_;
  WeakAsyncSystem target_;
  std::vector<EventId> events_;
  std::vector<StateId> states_;
};

struct MorphismViolation {
  int condition;  // 1: initial state, 2: transitions, 3: independence
  std::string detail;

  friend bool operator==(const MorphismViolation&, const MorphismViolation&) = default;
};

inline std::vector<MorphismViolation> morphism_violations(const SystemMorphism& m) {
  std::vector<MorphismViolation> out;
  const auto& a = m.source();
  const auto& b = m.target();
  if (m(a.initial()) != b.initial())
    out.push_back({1, "initial state " + a.state_name(a.initial()) + " maps to " + b.state_name(m(a.initial())) +
                          ", expected " + b.state_name(b.initial())});
  for (const auto& t : a.transitions()) {
    const EventId f = m.event(t.event);
    const StateId x = m(t.from), y = m(t.to);
    const std::string where = "(" + a.state_name(t.from) + "," + a.monoid().name(t.event) + "," +
                              a.state_name(t.to) + ")";
    // read in S'_*: an undefined endpoint is *, and a missing transition leads to *
    if (f == kEmpty) {
      if (x != y) out.push_back({2, where + " has undefined event image but its endpoints map apart"});
    } else if (b.step(x, f) != y) {
      out.push_back({2, where + " has no image transition"});
    }
  }
  for (auto [e1, e2] : a.monoid().independent_pairs()) {
    const EventId f1 = m.event(e1), f2 = m.event(e2);
    if (f1 != kEmpty && f2 != kEmpty && !b.monoid().independent(f1, f2))
      out.push_back({3, "independent (" + a.monoid().name(e1) + "," + a.monoid().name(e2) + ") maps to a dependent pair"});
  }
  return out;
}

inline bool is_morphism(const SystemMorphism& m) { return morphism_violations(m).empty(); }

/// The induced state-space morphism; requires valid systems.
inline SpaceMorphism to_space_morphism(const SystemMorphism& m) {
  return SpaceMorphism(detail::action_of(m.source()), detail::action_of(m.target()),
                       BasicHom::unchecked(m.source().monoid(), m.target().monoid(), m.events()), m.states());
}

/// Polygonality through the reflection criterion: whenever σ(s1) is
/// defined and σ(s1) can perform η(e) (where η(e) = 1 can always be
/// performed), s1 must be able to perform e.
inline bool is_polygonal(const SystemMorphism& m) {
  if (!is_morphism(m)) throw Error(ErrorCode::not_a_morphism, morphism_violations(m).front().detail);
  const auto& a = m.source();
  const auto& b = m.target();
  for (StateId s1 = 0; s1 < a.size(); ++s1) {
    const StateId image = m(s1);
    if (image == kStar) continue;
    for (EventId e = 0; e < a.monoid().size(); ++e) {
      const EventId f = m.event(e);
      const bool target_moves = f == kEmpty || b.step(image, f) != kStar;
      if (target_moves && a.step(s1, e) == kStar) return false;
    }
  }
  return true;
}

/// Polygonality by definition: a morphism whose induced pointed map is
/// equivariant for the actions with `*`, over an independence preserving
/// homomorphism.
inline bool is_polygonal_by_equivariance(const SystemMorphism& m) {
  if (!is_morphism(m)) return false;
  const SpaceMorphism sm = to_space_morphism(m);
  return sm.monoid_part().is_valid() && is_independence_preserving(sm.monoid_part()) &&
         equivariance_violations(sm).empty();
}

/// m2 ∘ m1.
inline SystemMorphism compose(const SystemMorphism& m2, const SystemMorphism& m1) {
  if (!(m1.target() == m2.source())) throw Error(ErrorCode::monoid_mismatch, "morphisms are not composable");
  std::vector<EventId> ev(m1.events().size());
  for (EventId e = 0; e < ev.size(); ++e) ev[e] = m1.event(e) == kEmpty ? kEmpty : m2.event(m1.event(e));
  std::vector<StateId> st(m1.states().size());
  for (StateId s = 0; s < st.size(); ++s) st[s] = m2(m1(s));
  return SystemMorphism(m1.source(), m2.target(), std::move(ev), std::move(st));
}

inline const WeakAsyncSystem& arrow_source(const SystemMorphism& m) { return m.source(); }
inline const WeakAsyncSystem& arrow_target(const SystemMorphism& m) { return m.target(); }

inline std::vector<std::string> arrow_diagnostics(const SystemMorphism& m, Category c) {
  std::vector<std::string> out;
  for (const auto* sys : {&m.source(), &m.target()})
    for (auto& d : validate_system(*sys)) out.push_back(d);
  if (!out.empty()) return out;
  for (auto& v : morphism_violations(m)) out.push_back("condition " + std::to_string(v.condition) + ": " + v.detail);
  if (!out.empty()) return out;
  if (!is_polygonal(m)) out.push_back("morphism is not polygonal");
  if (c == Category::fpcm_par && !is_independence_preserving(to_space_morphism(m).monoid_part()))
    out.push_back("event map is not independence preserving");
  return out;
}

using SystemDiagram = Diagram<WeakAsyncSystem, SystemMorphism>;

struct SystemCone {
  WeakAsyncSystem apex;
  std::vector<SystemMorphism> legs;
};

namespace detail {

inline SpaceDiagram underlying(const SystemDiagram& d) {
  SpaceDiagram sd{d.shape, {}, {}};
  for (const auto& o : d.objects) sd.objects.push_back(action_of(o));
  for (const auto& a : d.arrows) sd.arrows.push_back(to_space_morphism(a));
  return sd;
}

inline SystemCone system_cone(const SpaceCone& cone, std::span<const WeakAsyncSystem> objects) {
  // Limits in the comma category are created by the underlying limit; the
  // point is the unique state projecting onto every initial state.
  StateId initial = kStar;
  const bool all_star = std::all_of(objects.begin(), objects.end(), [](const auto& o) { return o.initial() == kStar; });
  if (!all_star) {
    for (StateId x = 0; x < cone.apex.size() && initial == kStar; ++x) {
      bool match = true;
      for (std::size_t i = 0; i < objects.size() && match; ++i) match = cone.legs[i](x) == objects[i].initial();
      if (match) initial = x;
    }
    if (initial == kStar) throw Error(ErrorCode::malformed_diagram, "initial states are not compatible");
  }
  SystemCone out{from_state_space(cone.apex, initial), {}};
  for (std::size_t i = 0; i < objects.size(); ++i)
    out.legs.emplace_back(out.apex, objects[i], cone.legs[i].monoid_part().image(), cone.legs[i].state_part());
  return out;
}

}  // namespace detail

inline SystemCone product(std::span<const WeakAsyncSystem> systems, Category category = Category::fpcm_par) {
  std::vector<StateSpace> spaces;
  for (const auto& s : systems) spaces.push_back(to_state_space(s).space);
  return detail::system_cone(product(spaces, category), systems);
}

inline SystemCone limit(const SystemDiagram& d, Category category = Category::fpcm_par) {
  require_valid(d, category);
  return detail::system_cone(limit(detail::underlying(d), category), d.objects);
}

struct SystemColimit {
  /// Apex system; when TRUNCATED its transitions are the materialized ones.
  WeakAsyncSystem apex;
  /// Populated only when EXACT.
  std::vector<SystemMorphism> legs;
  SpaceColimit space_colimit;

  SaturationStatus status() const { return space_colimit.saturation.status; }
};

/// Colimit in the category of state spaces under the point {p, *}: the
/// diagram is extended by the point, with one arrow p ↦ s0 into each
/// object, so all initial states are glued. The result's initial state is
/// the class of p, which is `*` if any initial state was `*`.
inline SystemColimit colimit(const SystemDiagram& d, Category category, std::size_t bound) {
  require_valid(d, category);
  SpaceDiagram sd = detail::underlying(d);
  std::string point_name = "pt";
  while (sd.shape.object_index(point_name)) point_name += "'";
  const StateSpace point(TraceMonoid(), {"p"}, {});
  const std::size_t n = d.objects.size();
  sd.shape.objects.push_back(point_name);
  sd.objects.push_back(point);
  for (std::size_t i = 0; i < n; ++i) {
    std::string arrow = point_name + "->" + d.shape.objects[i];
    while (std::any_of(sd.shape.arrows.begin(), sd.shape.arrows.end(), [&](const auto& a) { return a.name == arrow; }))
      arrow += "'";
    sd.shape.arrows.push_back({arrow, point_name, d.shape.objects[i]});
    sd.arrows.emplace_back(point, sd.objects[i], BasicHom::unchecked(TraceMonoid(), sd.objects[i].monoid(), {}),
                           std::vector<StateId>{d.objects[i].initial()});
  }
  SystemColimit out;
  out.space_colimit = colimit(sd, category, bound);
  const auto& sat = out.space_colimit.saturation;
  const StateId initial = sat.class_map[out.space_colimit.offsets[n]];
  out.apex = detail::system_of(sat.space, initial);
  if (sat.status == SaturationStatus::exact) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& leg = out.space_colimit.legs[i];
      out.legs.emplace_back(d.objects[i], out.apex, leg.monoid_part().image(), leg.state_part());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

/// Restriction to the states reachable from s0, keeping their order.
inline WeakAsyncSystem reachable(const WeakAsyncSystem& a) {
  std::vector<bool> seen(a.size(), false);
  if (a.initial() != kStar) {
    std::deque<StateId> queue{a.initial()};
    seen[a.initial()] = true;
    while (!queue.empty()) {
      const StateId s = queue.front();
      queue.pop_front();
      for (EventId e = 0; e < a.monoid().size(); ++e)
        if (StateId t = a.step(s, e); t != kStar && !seen[t]) {
          seen[t] = true;
          queue.push_back(t);
        }
    }
  }
  std::vector<StateId> position(a.size(), kStar);
  std::vector<std::string> names;
  for (StateId s = 0; s < a.size(); ++s)
    if (seen[s]) {
      position[s] = static_cast<StateId>(names.size());
      names.push_back(a.states()[s]);
    }
  std::vector<Transition> tr;
  for (const auto& t : a.transitions())
    if (seen[t.from]) tr.push_back({position[t.from], t.event, position[t.to]});
  return WeakAsyncSystem(a.monoid(), std::move(names), a.initial() == kStar ? kStar : position[a.initial()],
                         std::move(tr));
}

/// Canonical traces of length at most `depth` executable from s0, with
/// their end states, ordered by length then lexicographically.
inline std::vector<std::pair<Trace, StateId>> unfold(const WeakAsyncSystem& a, std::size_t depth) {
  std::vector<std::pair<Trace, StateId>> out;
  if (a.initial() == kStar) return out;
  std::map<Word, StateId> level{{Word{}, a.initial()}};
  for (std::size_t d = 0;; ++d) {
    for (const auto& [w, s] : level) out.emplace_back(Trace(a.monoid(), w), s);
    if (d == depth) break;
    std::map<Word, StateId> next;
    for (const auto& [w, s] : level)
      for (EventId e = 0; e < a.monoid().size(); ++e)
        if (StateId t = a.step(s, e); t != kStar) {
          Word v = w;
          v.push_back(e);
          next.emplace(detail::lex_normal_form(a.monoid(), v), t);
        }
    if (next.empty()) break;
    level = std::move(next);
  }
  return out;
}

}  // namespace tracecat

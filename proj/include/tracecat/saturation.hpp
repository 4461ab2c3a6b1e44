#pragma once

// Presented actions (generators and relations for a pointed M-set) and their
// bounded materialization. Colimits of state spaces are built as presented
// actions over the colimit monoid: freely extending each component along its
// cocone leg, then gluing along the diagram arrows.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracecat/diagram.hpp"
#include "tracecat/monoid_category.hpp"
#include "tracecat/state_space.hpp"
#include "tracecat/trace.hpp"

namespace tracecat {

/// generator·trace. The generator kStar denotes the basepoint.
struct Term {
  StateId generator = kStar;
  Word trace;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

/// generator·event = target (target may be kStar).
struct TransitionRule {
  StateId generator;
  EventId event;
  StateId target;

  friend bool operator==(const TransitionRule&, const TransitionRule&) = default;
};

struct Identification {
  Term lhs;
  Term rhs;

  friend bool operator==(const Identification&, const Identification&) = default;
};

struct PresentedAction {
  TraceMonoid monoid;
  std::vector<std::string> generators;
  std::vector<TransitionRule> transitions;
  std::vector<Identification> identifications;

  friend bool operator==(const PresentedAction&, const PresentedAction&) = default;
};

enum class SaturationStatus { exact, truncated };

constexpr std::string_view status_name(SaturationStatus s) {
  return s == SaturationStatus::exact ? "EXACT" : "TRUNCATED";
}

struct SaturationResult {
  SaturationStatus status = SaturationStatus::truncated;
  /// Complete when EXACT. When TRUNCATED, successors that were not
  /// materialized within the bound read as `*` and are listed in `frontier`.
  StateSpace space;
  std::vector<StateId> class_map;      // generator -> state (or kStar)
  std::vector<Term> representatives;   // state -> least term reaching it
  std::vector<Term> frontier;          // pending terms, sorted
};

/// Orders terms by generator, then length, then letters.
inline bool term_less(const Term& a, const Term& b) {
  if (a.generator != b.generator) return a.generator < b.generator;
  if (a.trace.size() != b.trace.size()) return a.trace.size() < b.trace.size();
  return a.trace < b.trace;
}

inline std::string render_term(const PresentedAction& p, const Term& t) {
  std::string out = t.generator == kStar ? std::string("*") : p.generators.at(t.generator);
  for (EventId e : t.trace) out += "." + p.monoid.name(e);
  return out;
}

inline constexpr std::size_t kMaxSaturationNodes = 200000;

namespace detail {

// Coset-enumeration style closure: nodes are classes of terms, `succ` is the
// partial action table, coincidences are merged together with their
// successors. New nodes are only defined below the depth bound.
class Saturator {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

 public:
  Saturator(const PresentedAction& p, std::size_t bound) : p_(p), bound_(bound), events_(p.monoid.size()) {
    add_node(Term{kStar, {}});
    for (auto& s : succ_.front()) s = 0;
    for (StateId g = 0; g < p.generators.size(); ++g) add_node(Term{g, {}});
  }

  SaturationResult run() {
    for (const auto& r : p_.transitions) {
      if (r.generator >= p_.generators.size() || r.event >= events_ ||
          (r.target != kStar && r.target >= p_.generators.size()))
        throw Error(ErrorCode::invalid_space, "transition rule refers to an unknown generator or event");
      set_successor(node_of_generator(r.generator), r.event, node_of_generator(r.target));
    }
    for (const auto& id : p_.identifications) {
      for (const Term* t : {&id.lhs, &id.rhs}) {
        if (t->generator != kStar && t->generator >= p_.generators.size())
          throw Error(ErrorCode::invalid_space, "identification refers to an unknown generator");
        detail::check_word(p_.monoid, t->trace);
      }
    }
    const auto pairs = p_.monoid.independent_pairs();
    for (bool changed = true; changed;) {
      changed = apply_identifications();
      for (std::size_t i = 0; i < succ_.size(); ++i) {
        if (find(i) != i) continue;
        for (auto [a, b] : pairs) {
          const auto ab = walk(walk(i, a), b);
          const auto ba = walk(walk(i, b), a);
          if (ab != kNone && ba != kNone) merge(ab, ba);
        }
        for (EventId e = 0; e < events_; ++e) walk(i, e);
      }
      changed |= std::exchange(dirty_, false);
    }
    return materialize();
  }

 private:
  std::uint32_t node_of_generator(StateId g) const { return g == kStar ? 0 : g + 1; }

  std::uint32_t add_node(Term t) {
    const auto id = static_cast<std::uint32_t>(succ_.size());
    succ_.emplace_back(events_, kNone);
    parent_.push_back(id);
    best_.push_back(t);
    if (t.generator != kStar) terms_.emplace(std::move(t), id);
    return id;
  }

  // The term a class extends from is its shortest one, so the depth bound
  // applies to the class rather than to one of its members.
  static bool shorter(const Term& a, const Term& b) {
    if (a.trace.size() != b.trace.size()) return a.trace.size() < b.trace.size();
    return term_less(a, b);
  }

  std::uint32_t find(std::uint32_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void set_successor(std::uint32_t n, EventId e, std::uint32_t target) {
    n = find(n);
    if (succ_[n][e] == kNone) {
      succ_[n][e] = target;
      dirty_ = true;
    } else {
      merge(succ_[n][e], target);
    }
  }

  // Successor of n along e, defining a fresh node if allowed.
  std::uint32_t walk(std::uint32_t n, EventId e) {
    if (n == kNone) return kNone;
    n = find(n);
    if (succ_[n][e] != kNone) return find(succ_[n][e]);
    const Term& base = best_[n];
    if (base.trace.size() >= bound_ || succ_.size() >= kMaxSaturationNodes) {
      if (succ_.size() >= kMaxSaturationNodes) capped_ = true;
      return kNone;
    }
    Word w = base.trace;
    w.push_back(e);
    Term t{base.generator, lex_normal_form(p_.monoid, w)};
    std::uint32_t m;
    if (auto it = terms_.find(t); it != terms_.end()) {
      m = it->second;
    } else {
      m = add_node(std::move(t));
    }
    succ_[n][e] = m;
    dirty_ = true;
    return find(m);
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue{{a, b}};
    while (!queue.empty()) {
      auto [x, y] = queue.front();
      queue.pop_front();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      if (y < x) std::swap(x, y);
      parent_[y] = x;
      dirty_ = true;
      if (x != 0 && shorter(best_[y], best_[x])) best_[x] = best_[y];
      for (EventId e = 0; e < events_; ++e) {
        const auto sy = succ_[y][e];
        if (sy == kNone) continue;
        if (succ_[x][e] == kNone) {
          succ_[x][e] = sy;
        } else {
          queue.emplace_back(succ_[x][e], sy);
        }
      }
    }
  }

  std::uint32_t trace_term(const Term& t) {
    std::uint32_t n = node_of_generator(t.generator);
    if (t.generator == kStar) return 0;
    for (EventId e : t.trace) {
      n = walk(n, e);
      if (n == kNone) return kNone;
    }
    return n;
  }

  bool apply_identifications() {
    bool changed = false;
    pending_.clear();
    for (std::size_t k = 0; k < p_.identifications.size(); ++k) {
      const auto& id = p_.identifications[k];
      const auto l = trace_term(id.lhs);
      const auto r = trace_term(id.rhs);
      if (l == kNone || r == kNone) {
        pending_.push_back(k);
        continue;
      }
      if (find(l) != find(r)) {
        merge(l, r);
        changed = true;
      }
    }
    return changed;
  }

  SaturationResult materialize() {
    // Classes containing a generator take the least such generator's name;
    // the rest are named by the least term reaching them, generators in
    // order and words in shortlex order from each generator.
    std::vector<StateId> state_of(succ_.size(), kStar);
    std::vector<Term> reps;
    for (StateId g = 0; g < p_.generators.size(); ++g) {
      const auto n = find(node_of_generator(g));
      if (n == 0 || state_of[n] != kStar) continue;
      state_of[n] = static_cast<StateId>(reps.size());
      reps.push_back(Term{g, {}});
    }
    for (StateId g = 0; g < p_.generators.size(); ++g) {
      std::vector<bool> seen(succ_.size(), false);
      std::deque<std::pair<std::uint32_t, Word>> queue;
      queue.emplace_back(find(node_of_generator(g)), Word{});
      seen[queue.front().first] = true;
      while (!queue.empty()) {
        auto [n, w] = std::move(queue.front());
        queue.pop_front();
        if (n == 0) continue;
        if (state_of[n] == kStar) {
          state_of[n] = static_cast<StateId>(reps.size());
          reps.push_back(Term{g, lex_normal_form(p_.monoid, w)});
        }
        for (EventId e = 0; e < events_; ++e) {
          if (succ_[n][e] == kNone) continue;
          const auto m = find(succ_[n][e]);
          if (seen[m]) continue;
          seen[m] = true;
          Word next = w;
          next.push_back(e);
          queue.emplace_back(m, std::move(next));
        }
      }
    }

    SaturationResult result;
    std::vector<std::uint32_t> node_of_state(reps.size());
    for (std::uint32_t n = 0; n < succ_.size(); ++n)
      if (find(n) == n && state_of[n] != kStar) node_of_state[state_of[n]] = n;

    std::vector<StateId> action(reps.size() * events_, kStar);
    std::vector<Term> frontier;
    for (StateId s = 0; s < reps.size(); ++s) {
      for (EventId e = 0; e < events_; ++e) {
        const auto m = succ_[node_of_state[s]][e];
        if (m == kNone) {
          Word w = reps[s].trace;
          w.push_back(e);
          frontier.push_back(Term{reps[s].generator, lex_normal_form(p_.monoid, w)});
          continue;
        }
        action[s * events_ + e] = find(m) == 0 ? kStar : state_of[find(m)];
      }
    }
    for (auto k : pending_) {
      frontier.push_back(p_.identifications[k].lhs);
      frontier.push_back(p_.identifications[k].rhs);
    }
    std::sort(frontier.begin(), frontier.end(), term_less);
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

    std::vector<std::string> names;
    for (const auto& t : reps) names.push_back(render_term(p_, t));
    result.space = StateSpace(p_.monoid, std::move(names), std::move(action));
    for (StateId g = 0; g < p_.generators.size(); ++g) {
      const auto n = find(node_of_generator(g));
      result.class_map.push_back(n == 0 ? kStar : state_of[n]);
    }
    result.representatives = std::move(reps);
    result.frontier = std::move(frontier);
    const bool complete = result.frontier.empty() && !capped_;
    result.status = complete && validate_space(result.space).empty() ? SaturationStatus::exact
                                                                     : SaturationStatus::truncated;
    return result;
  }

  const PresentedAction& p_;
  std::size_t bound_;
  std::size_t events_;
  std::vector<std::vector<std::uint32_t>> succ_;
  std::vector<std::uint32_t> parent_;
  std::vector<Term> best_;
  std::map<Term, std::uint32_t> terms_;
  std::vector<std::size_t> pending_;
  bool dirty_ = false;
  bool capped_ = false;
};

}  // namespace detail

/// Materializes the classes of terms generator·trace with trace length at
/// most `bound`. EXACT certifies that every class has all its successors
/// inside the explored region, so the result is the full quotient.
inline SaturationResult saturate(const PresentedAction& p, std::size_t bound) {
  return detail::Saturator(p, bound).run();
}

// ---------------------------------------------------------------------------

struct SpaceColimit {
  MonoidCocone monoid_cocone;
  PresentedAction presentation;
  SaturationResult saturation;
  /// Cocone legs; only populated when the saturation is EXACT.
  std::vector<SpaceMorphism> legs;
  /// Generator index of state x of object i is offsets[i] + x.
  std::vector<StateId> offsets;
};

/// The presentation has one generator "i:x" per proper state x of each
/// object i. Every x·e of D(i) becomes the rule x·q_i(e) = x·e, or the
/// identification x = x·e when q_i(e) = 1. Every arrow α: i -> j adds
/// x = σ_α(x).
inline SpaceColimit colimit(const SpaceDiagram& d, Category category, std::size_t bound) {
  require_valid(d, category);
  MonoidDiagram md{d.shape, {}, {}};
  for (const auto& o : d.objects) md.objects.push_back(o.monoid());
  for (const auto& a : d.arrows) md.arrows.push_back(a.monoid_part());

  SpaceColimit out;
  out.monoid_cocone = colimit(md, category);
  PresentedAction& p = out.presentation;
  p.monoid = out.monoid_cocone.apex;
  for (std::size_t i = 0; i < d.objects.size(); ++i) {
    out.offsets.push_back(static_cast<StateId>(p.generators.size()));
    for (const auto& s : d.objects[i].states()) p.generators.push_back(std::to_string(i) + ":" + s);
  }
  auto gen = [&](std::size_t i, StateId x) { return x == kStar ? kStar : out.offsets[i] + x; };
  for (std::size_t i = 0; i < d.objects.size(); ++i) {
    const StateSpace& X = d.objects[i];
    const BasicHom& q = out.monoid_cocone.legs[i];
    for (StateId x = 0; x < X.size(); ++x)
      for (EventId e = 0; e < X.monoid().size(); ++e) {
        const StateId y = X.act(x, e);
        if (q(e) != kEmpty) {
          p.transitions.push_back({gen(i, x), q(e), gen(i, y)});
        } else {
          p.identifications.push_back({Term{gen(i, x), {}}, Term{gen(i, y), {}}});
        }
      }
  }
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
    for (StateId x = 0; x < d.objects[i].size(); ++x)
      p.identifications.push_back({Term{gen(i, x), {}}, Term{gen(j, d.arrows[k](x)), {}}});
  }
  out.saturation = saturate(p, bound);
  if (out.saturation.status == SaturationStatus::exact) {
    for (std::size_t i = 0; i < d.objects.size(); ++i) {
      std::vector<StateId> states(d.objects[i].size());
      for (StateId x = 0; x < states.size(); ++x) states[x] = out.saturation.class_map[gen(i, x)];
      out.legs.emplace_back(d.objects[i], out.saturation.space, out.monoid_cocone.legs[i], std::move(states));
    }
  }
  return out;
}

/// Mediating morphism from an EXACT colimit to a cocone with the given legs.
inline std::optional<SpaceMorphism> factor_through_colimit(const SpaceColimit& c, const StateSpace& target,
                                                           std::span<const SpaceMorphism> legs) {
  if (c.saturation.status != SaturationStatus::exact) return std::nullopt;
  std::vector<BasicHom> monoid_legs;
  for (const auto& l : legs) monoid_legs.push_back(l.monoid_part());
  auto kappa = factor_through_colimit(c.monoid_cocone, target.monoid(), monoid_legs);
  if (!kappa) return std::nullopt;
  std::vector<StateId> states;
  for (const auto& rep : c.saturation.representatives) {
    std::size_t i = 0;
    while (rep.generator >= c.offsets[i] + legs[i].source().size()) ++i;
    StateId y = legs[i](rep.generator - c.offsets[i]);
    for (EventId e : rep.trace) y = target.act(y, (*kappa)(e));
    states.push_back(y);
  }
  return SpaceMorphism(c.saturation.space, target, *kappa, std::move(states));
}

}  // namespace tracecat

#pragma once

// Limits and colimits of trace monoids under basic homomorphisms (FPCM) and
// under independence preserving ones (FPCM_PAR), the pointed-relation views
// ComRel and IndRel, and the right adjoint of the inclusion into monoids.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracecat/diagram.hpp"
#include "tracecat/error.hpp"
#include "tracecat/trace.hpp"
#include "tracecat/union_find.hpp"

namespace tracecat {

/// True if h is a morphism of the given category.
inline bool admissible(const BasicHom& h, Category c) {
  return h.is_valid() && (c == Category::fpcm || is_independence_preserving(h));
}

inline const TraceMonoid& arrow_source(const BasicHom& h) { return h.source(); }
inline const TraceMonoid& arrow_target(const BasicHom& h) { return h.target(); }

inline std::vector<std::string> arrow_diagnostics(const BasicHom& h, Category c) {
  std::vector<std::string> out;
  for (auto [a, b] : h.violations())
    out.push_back("independent pair (" + h.source().name(a) + "," + h.source().name(b) + ") is not preserved");
  if (c == Category::fpcm_par && !is_independence_preserving(h)) out.push_back("not independence preserving");
  return out;
}

using MonoidDiagram = Diagram<TraceMonoid, BasicHom>;

/// Legs go out of the apex.
struct MonoidCone {
  TraceMonoid apex;
  std::vector<BasicHom> legs;
};

/// Legs go into the apex.
struct MonoidCocone {
  TraceMonoid apex;
  std::vector<BasicHom> legs;
};

// ---------------------------------------------------------------------------
// Pointed relation views. Pairs use kEmpty for the basepoint `*`.

struct ComRelView {
  std::vector<std::string> events;
  std::set<EventPair> commutativity;

  friend bool operator==(const ComRelView&, const ComRelView&) = default;
};

struct IndRelView {
  std::vector<std::string> events;
  std::set<EventPair> independence;

  friend bool operator==(const IndRelView&, const IndRelView&) = default;
};

namespace detail {

inline std::vector<EventId> pointed_elements(std::size_t n) {
  std::vector<EventId> out;
  for (EventId e = 0; e < n; ++e) out.push_back(e);
  out.push_back(kEmpty);
  return out;
}

inline void add_star_pairs(std::set<EventPair>& rel, std::size_t n) {
  for (EventId x : pointed_elements(n)) {
    rel.emplace(x, kEmpty);
    rel.emplace(kEmpty, x);
  }
}

inline void check_pointed_relation(const std::set<EventPair>& rel, std::size_t n) {
  for (auto [a, b] : rel) {
    if ((a != kEmpty && a >= n) || (b != kEmpty && b >= n))
      throw Error(ErrorCode::malformed_relation, "pair mentions an element outside the pointed set");
    if (!rel.contains({b, a})) throw Error(ErrorCode::malformed_relation, "relation is not symmetric");
  }
  for (EventId x : pointed_elements(n))
    if (!rel.contains({x, kEmpty}) || !rel.contains({kEmpty, x}))
      throw Error(ErrorCode::malformed_relation, "missing a pair with the basepoint");
}

}  // namespace detail

inline ComRelView to_com_rel(const TraceMonoid& m) {
  ComRelView v{m.events(), {}};
  detail::add_star_pairs(v.commutativity, m.size());
  for (EventId x : detail::pointed_elements(m.size())) v.commutativity.emplace(x, x);
  for (auto [a, b] : m.independent_pairs()) {
    v.commutativity.emplace(a, b);
    v.commutativity.emplace(b, a);
  }
  return v;
}

inline TraceMonoid from_com_rel(const ComRelView& v) {
  const std::size_t n = v.events.size();
  detail::check_pointed_relation(v.commutativity, n);
  for (EventId x : detail::pointed_elements(n))
    if (!v.commutativity.contains({x, x})) throw Error(ErrorCode::malformed_relation, "relation is not reflexive");
  std::vector<EventPair> pairs;
  for (auto [a, b] : v.commutativity)
    if (a != kEmpty && b != kEmpty && a < b) pairs.emplace_back(a, b);
  return TraceMonoid::make(v.events, pairs);
}

inline IndRelView to_ind_rel(const TraceMonoid& m) {
  IndRelView v{m.events(), {}};
  detail::add_star_pairs(v.independence, m.size());
  for (auto [a, b] : m.independent_pairs()) {
    v.independence.emplace(a, b);
    v.independence.emplace(b, a);
  }
  return v;
}

inline TraceMonoid from_ind_rel(const IndRelView& v) {
  const std::size_t n = v.events.size();
  detail::check_pointed_relation(v.independence, n);
  std::vector<EventPair> pairs;
  for (auto [a, b] : v.independence) {
    if (a == b && a != kEmpty) throw Error(ErrorCode::malformed_relation, "(a,a) with a other than the basepoint");
    if (a != kEmpty && b != kEmpty && a < b) pairs.emplace_back(a, b);
  }
  return TraceMonoid::make(v.events, pairs);
}

// ---------------------------------------------------------------------------
// Products

inline constexpr std::size_t kMaxGenerators = 4096;

/// Generators are the tuples of the pointed product except (*,…,*), listed
/// with the first coordinate varying fastest. Under FPCM two tuples are
/// independent when every coordinate pair lies in the commutativity
/// relation; under FPCM_PAR, in the partial independence relation.
inline MonoidCone product(std::span<const TraceMonoid> factors, Category category) {
  std::vector<std::size_t> stride(factors.size() + 1, 1);
  for (std::size_t j = 0; j < factors.size(); ++j) {
    stride[j + 1] = stride[j] * (factors[j].size() + 1);
    if (stride[j + 1] > kMaxGenerators + 1) throw Error(ErrorCode::size_limit, "product has too many generators");
  }
  const std::size_t total = stride.back();
  auto digit = [&](std::size_t code, std::size_t j) { return (code / stride[j]) % (factors[j].size() + 1); };

  std::vector<std::string> names;
  for (std::size_t code = 1; code < total; ++code) {
    std::string name = "(";
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (j > 0) name += ',';
      const std::size_t d = digit(code, j);
      name += d == 0 ? std::string("*") : factors[j].name(static_cast<EventId>(d - 1));
    }
    names.push_back(name + ")");
  }

  std::vector<EventPair> pairs;
  for (std::size_t x = 1; x < total; ++x) {
    for (std::size_t y = x + 1; y < total; ++y) {
      bool related = true;
      for (std::size_t j = 0; j < factors.size() && related; ++j) {
        const std::size_t a = digit(x, j), b = digit(y, j);
        if (a == 0 || b == 0) continue;
        if (a == b) {
          related = category == Category::fpcm;
        } else {
          related = factors[j].independent(static_cast<EventId>(a - 1), static_cast<EventId>(b - 1));
        }
      }
      if (related) pairs.emplace_back(static_cast<EventId>(x - 1), static_cast<EventId>(y - 1));
    }
  }
  MonoidCone cone{TraceMonoid::make(std::move(names), pairs), {}};
  for (std::size_t j = 0; j < factors.size(); ++j) {
    std::vector<EventId> image(total - 1);
    for (std::size_t code = 1; code < total; ++code) {
      const std::size_t d = digit(code, j);
      image[code - 1] = d == 0 ? kEmpty : static_cast<EventId>(d - 1);
    }
    cone.legs.push_back(BasicHom::unchecked(cone.apex, factors[j], std::move(image)));
  }
  return cone;
}

/// The homomorphism into a product induced by one leg per factor.
inline BasicHom tuple(const TraceMonoid& source, const MonoidCone& prod, std::span<const BasicHom> legs) {
  if (legs.size() != prod.legs.size()) throw Error(ErrorCode::monoid_mismatch, "one leg per factor is required");
  std::vector<std::size_t> stride(legs.size(), 1);
  for (std::size_t j = 1; j < legs.size(); ++j) stride[j] = stride[j - 1] * (prod.legs[j - 1].target().size() + 1);
  for (std::size_t j = 0; j < legs.size(); ++j)
    if (!(legs[j].source() == source) || !(legs[j].target() == prod.legs[j].target()))
      throw Error(ErrorCode::monoid_mismatch, "leg does not match the product factor");
  std::vector<EventId> image(source.size());
  for (EventId t = 0; t < source.size(); ++t) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < legs.size(); ++j)
      if (EventId v = legs[j](t); v != kEmpty) code += (v + 1) * stride[j];
    image[t] = code == 0 ? kEmpty : static_cast<EventId>(code - 1);
  }
  return BasicHom::unchecked(source, prod.apex, std::move(image));
}

// ---------------------------------------------------------------------------
// Equalizers

namespace detail {

inline void require_parallel(const BasicHom& f, const BasicHom& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw Error(ErrorCode::not_parallel, "homomorphisms do not share source and target");
}

inline void require_admissible(const BasicHom& h, Category c) {
  if (!h.is_valid()) throw Error(ErrorCode::invalid_hom, "homomorphism is not well defined");
  if (c == Category::fpcm_par && !is_independence_preserving(h))
    throw Error(ErrorCode::not_independence_preserving, "homomorphism is not independence preserving");
}

}  // namespace detail

/// The submonoid generated by {e : f(e) = g(e)}, with its inclusion. The
/// same object serves both categories.
inline MonoidCone equalizer(const BasicHom& f, const BasicHom& g, Category category) {
  detail::require_parallel(f, g);
  detail::require_admissible(f, category);
  detail::require_admissible(g, category);
  const TraceMonoid& src = f.source();
  std::vector<EventId> kept;
  for (EventId e = 0; e < src.size(); ++e)
    if (f(e) == g(e)) kept.push_back(e);
  std::vector<std::string> names;
  for (EventId e : kept) names.push_back(src.name(e));
  std::vector<EventPair> pairs;
  for (EventId i = 0; i < kept.size(); ++i)
    for (EventId j = i + 1; j < kept.size(); ++j)
      if (src.independent(kept[i], kept[j])) pairs.emplace_back(i, j);
  MonoidCone cone{TraceMonoid::make(std::move(names), pairs), {}};
  cone.legs.push_back(BasicHom::unchecked(cone.apex, src, kept));
  return cone;
}

// ---------------------------------------------------------------------------
// Coproducts

/// Disjoint union of generators, named "j:e", with no cross independence.
inline MonoidCocone coproduct(std::span<const TraceMonoid> summands, Category /*category*/ = Category::fpcm) {
  std::vector<std::string> names;
  std::vector<EventPair> pairs;
  std::vector<EventId> offset;
  for (std::size_t j = 0; j < summands.size(); ++j) {
    const auto base = static_cast<EventId>(names.size());
    offset.push_back(base);
    for (const auto& n : summands[j].events()) names.push_back(std::to_string(j) + ":" + n);
    for (auto [a, b] : summands[j].independent_pairs()) pairs.emplace_back(base + a, base + b);
  }
  if (names.size() > kMaxGenerators) throw Error(ErrorCode::size_limit, "coproduct has too many generators");
  MonoidCocone cocone{TraceMonoid::make(std::move(names), pairs), {}};
  for (std::size_t j = 0; j < summands.size(); ++j) {
    std::vector<EventId> image(summands[j].size());
    for (EventId e = 0; e < image.size(); ++e) image[e] = offset[j] + e;
    cocone.legs.push_back(BasicHom::unchecked(summands[j], cocone.apex, std::move(image)));
  }
  return cocone;
}

/// The homomorphism out of a coproduct induced by one leg per summand.
inline BasicHom copairing(const MonoidCocone& coprod, const TraceMonoid& target, std::span<const BasicHom> legs) {
  if (legs.size() != coprod.legs.size()) throw Error(ErrorCode::monoid_mismatch, "one leg per summand is required");
  std::vector<EventId> image(coprod.apex.size(), kEmpty);
  for (std::size_t j = 0; j < legs.size(); ++j) {
    if (!(legs[j].source() == coprod.legs[j].source()) || !(legs[j].target() == target))
      throw Error(ErrorCode::monoid_mismatch, "leg does not match the coproduct summand");
    for (EventId e = 0; e < legs[j].source().size(); ++e) image[coprod.legs[j](e)] = legs[j](e);
  }
  return BasicHom::unchecked(coprod.apex, target, std::move(image));
}

// ---------------------------------------------------------------------------
// Coequalizers

namespace detail {

// Quotient of `m` by a partition of its generators. `classes` has m.size()+1
// entries; the last one stands for the identity and every generator in its
// class is sent to 1. Merged classes are named "[a,b,…]". Two surviving
// classes are independent iff some pair of representatives is.
inline MonoidCocone quotient(const TraceMonoid& m, const UnionFind& classes) {
  const std::size_t n = m.size();
  const std::size_t unit = n;
  std::vector<EventId> class_of(n, kEmpty);
  std::vector<std::vector<EventId>> members;
  std::vector<std::size_t> root_to_class(n + 1, static_cast<std::size_t>(-1));
  for (EventId e = 0; e < n; ++e) {
    if (classes.same(e, unit)) continue;
    const std::size_t r = classes.find(e);
    if (root_to_class[r] == static_cast<std::size_t>(-1)) {
      root_to_class[r] = members.size();
      members.emplace_back();
    }
    class_of[e] = static_cast<EventId>(root_to_class[r]);
    members[root_to_class[r]].push_back(e);
  }
  std::vector<std::string> names;
  for (const auto& cls : members) {
    if (cls.size() == 1) {
      names.push_back(m.name(cls.front()));
      continue;
    }
    std::string name = "[";
    for (std::size_t i = 0; i < cls.size(); ++i) name += (i ? "," : "") + m.name(cls[i]);
    names.push_back(name + "]");
  }
  std::set<EventPair> pairs;
  for (auto [a, b] : m.independent_pairs()) {
    const EventId ca = class_of[a], cb = class_of[b];
    if (ca == kEmpty || cb == kEmpty || ca == cb) continue;
    pairs.emplace(std::min(ca, cb), std::max(ca, cb));
  }
  std::vector<EventPair> pair_list(pairs.begin(), pairs.end());
  MonoidCocone cocone{TraceMonoid::make(std::move(names), pair_list), {}};
  cocone.legs.push_back(BasicHom::unchecked(m, cocone.apex, std::move(class_of)));
  return cocone;
}

}  // namespace detail

/// Coequalizer in FPCM: target generators modulo f(e) ~ g(e), where the
/// identity is a class of its own and generators equated with it vanish.
inline MonoidCocone coequalizer_fpcm(const BasicHom& f, const BasicHom& g) {
  detail::require_parallel(f, g);
  detail::require_admissible(f, Category::fpcm);
  detail::require_admissible(g, Category::fpcm);
  const std::size_t n = f.target().size();
  detail::UnionFind classes(n + 1);
  auto node = [n](EventId v) { return v == kEmpty ? n : static_cast<std::size_t>(v); };
  for (EventId e = 0; e < f.source().size(); ++e) classes.unite(node(f(e)), node(g(e)));
  return detail::quotient(f.target(), classes);
}

/// Composes h with the quotient of its target that sends to 1 every class
/// hit by two independent source generators, repeated until h is
/// independence preserving. This is the reflection of h into FPCM_PAR.
inline BasicHom kill_collisions(BasicHom h) {
  for (;;) {
    const std::size_t n = h.target().size();
    detail::UnionFind classes(n + 1);
    bool changed = false;
    for (auto [a, b] : h.source().independent_pairs()) {
      if (h(a) != kEmpty && h(a) == h(b)) changed |= classes.unite(h(a), n);
    }
    if (!changed) return h;
    h = compose(detail::quotient(h.target(), classes).legs.front(), h);
  }
}

/// Coequalizer in FPCM_PAR: the FPCM coequalizer followed by killing every
/// class that identifies two independent target generators.
inline MonoidCocone coequalizer_ip(const BasicHom& f, const BasicHom& g) {
  detail::require_parallel(f, g);
  detail::require_admissible(f, Category::fpcm_par);
  detail::require_admissible(g, Category::fpcm_par);
  MonoidCocone q = coequalizer_fpcm(f, g);
  BasicHom h = kill_collisions(q.legs.front());
  return MonoidCocone{h.target(), {h}};
}

inline MonoidCocone coequalizer(const BasicHom& f, const BasicHom& g, Category category) {
  return category == Category::fpcm ? coequalizer_fpcm(f, g) : coequalizer_ip(f, g);
}

// ---------------------------------------------------------------------------
// Limits and colimits of finite diagrams

/// Equalizer of the two canonical maps from the product over objects to
/// the product over arrow codomains.
inline MonoidCone limit(const MonoidDiagram& d, Category category) {
  require_valid(d, category);
  MonoidCone objects = product(d.objects, category);
  std::vector<TraceMonoid> codomains;
  std::vector<BasicHom> sides, actions;
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
    codomains.push_back(d.objects[j]);
    sides.push_back(objects.legs[j]);
    actions.push_back(compose(d.arrows[k], objects.legs[i]));
  }
  MonoidCone arrows = product(codomains, category);
  MonoidCone eq = equalizer(tuple(objects.apex, arrows, sides), tuple(objects.apex, arrows, actions), category);
  MonoidCone cone{eq.apex, {}};
  for (const auto& leg : objects.legs) cone.legs.push_back(compose(leg, eq.legs.front()));
  return cone;
}

/// Coequalizer of the two canonical maps from the coproduct over arrow
/// domains to the coproduct over objects.
inline MonoidCocone colimit(const MonoidDiagram& d, Category category) {
  require_valid(d, category);
  MonoidCocone objects = coproduct(d.objects, category);
  std::vector<TraceMonoid> domains;
  std::vector<BasicHom> sides, actions;
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const std::size_t i = d.shape.source_index(k), j = d.shape.target_index(k);
    domains.push_back(d.objects[i]);
    sides.push_back(objects.legs[i]);
    actions.push_back(compose(objects.legs[j], d.arrows[k]));
  }
  MonoidCocone arrows = coproduct(domains, category);
  MonoidCocone q = coequalizer(copairing(arrows, objects.apex, sides), copairing(arrows, objects.apex, actions),
                               category);
  MonoidCocone cocone{q.apex, {}};
  for (const auto& leg : objects.legs) cocone.legs.push_back(compose(q.legs.front(), leg));
  return cocone;
}

/// Mediating morphism from a cone with the given legs into a limit cone.
/// Returns nullopt when no generator-wise factorization exists.
inline std::optional<BasicHom> factor_through_limit(const MonoidCone& limit_cone, const TraceMonoid& source,
                                                    std::span<const BasicHom> legs) {
  std::vector<EventId> image(source.size(), kEmpty);
  for (EventId t = 0; t < source.size(); ++t) {
    auto matches = [&](EventId p) {
      for (std::size_t i = 0; i < legs.size(); ++i)
        if ((p == kEmpty ? kEmpty : limit_cone.legs[i](p)) != legs[i](t)) return false;
      return true;
    };
    if (matches(kEmpty)) continue;
    EventId found = kEmpty;
    for (EventId p = 0; p < limit_cone.apex.size() && found == kEmpty; ++p)
      if (matches(p)) found = p;
    if (found == kEmpty) return std::nullopt;
    image[t] = found;
  }
  return BasicHom::unchecked(source, limit_cone.apex, std::move(image));
}

/// Mediating morphism from a colimit cocone to a cocone with the given legs.
inline std::optional<BasicHom> factor_through_colimit(const MonoidCocone& colimit_cocone, const TraceMonoid& target,
                                                      std::span<const BasicHom> legs) {
  std::vector<EventId> image(colimit_cocone.apex.size(), kEmpty);
  std::vector<bool> fixed(image.size(), false);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    for (EventId e = 0; e < legs[i].source().size(); ++e) {
      const EventId c = colimit_cocone.legs[i](e);
      if (c == kEmpty) {
        if (legs[i](e) != kEmpty) return std::nullopt;
        continue;
      }
      if (fixed[c] && image[c] != legs[i](e)) return std::nullopt;
      image[c] = legs[i](e);
      fixed[c] = true;
    }
  }
  return BasicHom::unchecked(colimit_cocone.apex, target, std::move(image));
}

// ---------------------------------------------------------------------------
// Right adjoint R : Mon -> FPCM

/// Multiplication table of a finite monoid; table[x][y] = x·y.
struct MonoidTable {
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> table;

  friend bool operator==(const MonoidTable&, const MonoidTable&) = default;
};

inline constexpr std::size_t kMaxTableSize = 64;

/// Returns the identity element; throws NotAMonoid otherwise.
inline std::size_t check_monoid_table(const MonoidTable& t) {
  const std::size_t n = t.table.size();
  if (n == 0) throw Error(ErrorCode::not_a_monoid, "empty carrier");
  if (n > kMaxTableSize) throw Error(ErrorCode::size_limit, "carrier larger than 64 elements");
  if (t.elements.size() != n) throw Error(ErrorCode::not_a_monoid, "element names do not match the table");
  for (const auto& row : t.table) {
    if (row.size() != n) throw Error(ErrorCode::not_a_monoid, "table is not square");
    for (std::size_t v : row)
      if (v >= n) throw Error(ErrorCode::not_a_monoid, "product outside the carrier");
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (t.table[t.table[x][y]][z] != t.table[x][t.table[y][z]])
          throw Error(ErrorCode::not_a_monoid, "multiplication is not associative");
  for (std::size_t u = 0; u < n; ++u) {
    bool unit = true;
    for (std::size_t x = 0; x < n && unit; ++x) unit = t.table[u][x] == x && t.table[x][u] == x;
    if (unit) return u;
  }
  throw Error(ErrorCode::not_a_monoid, "no identity element");
}

struct RightAdjoint {
  TraceMonoid monoid;              // M(M \ {1}, I_M)
  std::size_t identity = 0;        // index of 1 in the table
  std::vector<std::size_t> counit; // generator -> table element
};

/// R(M) has the non-identity elements as generators; distinct commuting
/// elements are independent. The counit sends each generator to itself.
inline RightAdjoint right_adjoint(const MonoidTable& t) {
  RightAdjoint r;
  r.identity = check_monoid_table(t);
  std::vector<std::string> names;
  for (std::size_t x = 0; x < t.table.size(); ++x) {
    if (x == r.identity) continue;
    r.counit.push_back(x);
    names.push_back(t.elements[x]);
  }
  std::vector<EventPair> pairs;
  for (EventId a = 0; a < r.counit.size(); ++a)
    for (EventId b = a + 1; b < r.counit.size(); ++b) {
      const std::size_t x = r.counit[a], y = r.counit[b];
      if (t.table[x][y] == t.table[y][x]) pairs.emplace_back(a, b);
    }
  r.monoid = TraceMonoid::make(std::move(names), pairs);
  return r;
}

// ---------------------------------------------------------------------------

/// Calls visit(bijection) for every event bijection a -> b that preserves
/// and reflects independence, until visit returns true. Returns whether
/// some call returned true.
template <class Visit>
bool for_each_monoid_isomorphism(const TraceMonoid& a, const TraceMonoid& b, Visit&& visit) {
  const std::size_t n = a.size();
  if (n != b.size() || a.independent_pairs().size() != b.independent_pairs().size()) return false;
  auto degree = [](const TraceMonoid& m, EventId e) {
    std::size_t d = 0;
    for (EventId x = 0; x < m.size(); ++x) d += m.independent(e, x);
    return d;
  };
  std::vector<EventId> map(n, kEmpty);
  std::vector<bool> used(n, false);
  auto search = [&](auto& self, EventId i) -> bool {
    if (i == n) return visit(std::as_const(map));
    for (EventId c = 0; c < n; ++c) {
      if (used[c] || degree(a, i) != degree(b, c)) continue;
      bool ok = true;
      for (EventId j = 0; j < i && ok; ++j) ok = a.independent(i, j) == b.independent(c, map[j]);
      if (!ok) continue;
      used[c] = true;
      map[i] = c;
      const bool stop = self(self, i + 1);
      used[c] = false;
      if (stop) return true;
    }
    return false;
  };
  return search(search, 0);
}

/// An event bijection a -> b preserving and reflecting independence.
inline std::optional<std::vector<EventId>> monoid_isomorphism(const TraceMonoid& a, const TraceMonoid& b) {
  std::optional<std::vector<EventId>> found;
  for_each_monoid_isomorphism(a, b, [&](const std::vector<EventId>& m) {
    found = m;
    return true;
  });
  return found;
}

}  // namespace tracecat

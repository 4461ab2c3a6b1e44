#pragma once

// Finite diagram shapes (free categories on finite graphs) and diagrams
// assigning objects and arrows of some category to a shape.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tracecat/error.hpp"

namespace tracecat {

/// FPCM uses all basic homomorphisms; FPCM_PAR only the independence
/// preserving ones.
enum class Category { fpcm, fpcm_par };

constexpr std::string_view category_name(Category c) { return c == Category::fpcm ? "fpcm" : "fpcm-par"; }

inline std::optional<Category> parse_category(std::string_view s) {
  if (s == "fpcm") return Category::fpcm;
  if (s == "fpcm-par" || s == "fpcm_par") return Category::fpcm_par;
  return std::nullopt;
}

struct ShapeArrow {
  std::string name;
  std::string source;
  std::string target;

  friend bool operator==(const ShapeArrow&, const ShapeArrow&) = default;
};

/// Denotes the free category on the graph (objects, arrows). Composites are
/// not listed; commuting conditions between paths cannot be expressed.
struct DiagramShape {
  std::vector<std::string> objects;
  std::vector<ShapeArrow> arrows;

  std::optional<std::size_t> object_index(std::string_view name) const {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i] == name) return i;
    return std::nullopt;
  }

  std::size_t source_index(std::size_t arrow) const { return require(arrows.at(arrow).source); }
  std::size_t target_index(std::size_t arrow) const { return require(arrows.at(arrow).target); }

  friend bool operator==(const DiagramShape&, const DiagramShape&) = default;

 private:
  std::size_t require(std::string_view name) const {
    if (auto i = object_index(name)) return *i;
    throw Error(ErrorCode::malformed_diagram, "unknown object '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> validate_shape(const DiagramShape& s) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& o : s.objects)
    if (!seen.insert(o).second) out.push_back("duplicate object name '" + o + "'");
  std::set<std::string> arrow_names;
  for (const auto& a : s.arrows) {
    if (!arrow_names.insert(a.name).second) out.push_back("duplicate arrow name '" + a.name + "'");
    if (!s.object_index(a.source)) out.push_back("dangling endpoint: arrow '" + a.name + "' source '" + a.source + "'");
    if (!s.object_index(a.target)) out.push_back("dangling endpoint: arrow '" + a.name + "' target '" + a.target + "'");
  }
  return out;
}

namespace shapes {

inline DiagramShape discrete(std::size_t n) {
  DiagramShape s;
  for (std::size_t i = 0; i < n; ++i) s.objects.push_back(std::to_string(i));
  return s;
}

inline DiagramShape parallel_pair() { return {{"A", "B"}, {{"f", "A", "B"}, {"g", "A", "B"}}}; }

inline DiagramShape span() { return {{"apex", "left", "right"}, {{"l", "apex", "left"}, {"r", "apex", "right"}}}; }

inline DiagramShape cospan() { return {{"left", "right", "apex"}, {{"l", "left", "apex"}, {"r", "right", "apex"}}}; }

}  // namespace shapes

/// Objects and arrows are stored parallel to `shape.objects` and
/// `shape.arrows`. The arrow type must provide ADL-visible
/// `arrow_source(a)`, `arrow_target(a)` and `arrow_diagnostics(a, category)`.
template <class Object, class Arrow>
struct Diagram {
  DiagramShape shape;
  std::vector<Object> objects;
  std::vector<Arrow> arrows;

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

template <class Object, class Arrow>
std::vector<std::string> validate_diagram(const Diagram<Object, Arrow>& d, Category category) {
  std::vector<std::string> out = validate_shape(d.shape);
  if (d.objects.size() != d.shape.objects.size()) out.push_back("object assignment does not match the shape");
  if (d.arrows.size() != d.shape.arrows.size()) out.push_back("arrow assignment does not match the shape");
  if (!out.empty()) return out;
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const auto& name = d.shape.arrows[k].name;
    const std::size_t i = d.shape.source_index(k);
    const std::size_t j = d.shape.target_index(k);
    if (!(arrow_source(d.arrows[k]) == d.objects[i])) out.push_back("arrow '" + name + "' has a mismatched source");
    if (!(arrow_target(d.arrows[k]) == d.objects[j])) out.push_back("arrow '" + name + "' has a mismatched target");
    for (auto& msg : arrow_diagnostics(d.arrows[k], category)) out.push_back("arrow '" + name + "': " + msg);
  }
  return out;
}

template <class Object, class Arrow>
void require_valid(const Diagram<Object, Arrow>& d, Category category) {
  auto diags = validate_diagram(d, category);
  if (!diags.empty()) throw Error(ErrorCode::malformed_diagram, diags.front());
}

}  // namespace tracecat

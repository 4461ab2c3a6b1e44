#pragma once

// JSON interchange format. A bundle is
//   {"version": 1, "documents": {"<name>": {"kind": "...", ...}, ...}}
// and a reference to another document is either its name or an inline
// document object.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tracecat/async_system.hpp"
#include "tracecat/diagram.hpp"
#include "tracecat/error.hpp"
#include "tracecat/monoid_category.hpp"
#include "tracecat/state_space.hpp"
#include "tracecat/trace.hpp"

namespace tracecat {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

using Document = std::variant<TraceMonoid, BasicHom, StateSpace, SpaceMorphism, WeakAsyncSystem, SystemMorphism,
                              DiagramShape, MonoidDiagram, SpaceDiagram, SystemDiagram, MonoidTable>;

inline std::string_view document_kind(const Document& d) {
  static constexpr std::string_view kinds[] = {"monoid", "hom",   "space",   "space_morphism", "system",      "system_morphism",
                                               "shape",  "diagram", "diagram", "diagram",        "monoid_table"};
  return kinds[d.index()];
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline json event_map(const TraceMonoid& source, const TraceMonoid& target, const std::vector<EventId>& image) {
  json out = json::object();
  for (EventId e = 0; e < source.size(); ++e)
    out[source.name(e)] = image[e] == kEmpty ? json(nullptr) : json(target.name(image[e]));
  return out;
}

template <class S, class T>
json state_map(const S& source, const T& target, const std::vector<StateId>& image) {
  json out = json::object();
  for (StateId x = 0; x < source.size(); ++x) out[source.states()[x]] = target.state_name(image[x]);
  return out;
}

}  // namespace detail

inline json to_json(const TraceMonoid& m) {
  json pairs = json::array();
  for (auto [a, b] : m.independent_pairs()) pairs.push_back({m.name(a), m.name(b)});
  return {{"kind", "monoid"}, {"events", m.events()}, {"independence", pairs}};
}

inline json to_json(const BasicHom& h) {
  return {{"kind", "hom"},
          {"source", to_json(h.source())},
          {"target", to_json(h.target())},
          {"map", detail::event_map(h.source(), h.target(), h.image())}};
}

inline json to_json(const StateSpace& s) {
  json action = json::object();
  for (StateId x = 0; x < s.size(); ++x)
    for (EventId e = 0; e < s.monoid().size(); ++e)
      if (StateId y = s.act(x, e); y != kStar) action[s.states()[x]][s.monoid().name(e)] = s.states()[y];
  return {{"kind", "space"}, {"monoid", to_json(s.monoid())}, {"states", s.states()}, {"action", action}};
}

inline json to_json(const SpaceMorphism& m) {
  return {{"kind", "space_morphism"},
          {"source", to_json(m.source())},
          {"target", to_json(m.target())},
          {"events", detail::event_map(m.source().monoid(), m.target().monoid(), m.monoid_part().image())},
          {"states", detail::state_map(m.source(), m.target(), m.state_part())}};
}

inline json to_json(const WeakAsyncSystem& a) {
  json tr = json::array();
  for (const auto& t : a.transitions())
    tr.push_back({a.state_name(t.from), a.monoid().name(t.event), a.state_name(t.to)});
  return {{"kind", "system"},
          {"monoid", to_json(a.monoid())},
          {"states", a.states()},
          {"initial", a.state_name(a.initial())},
          {"transitions", tr}};
}

inline json to_json(const SystemMorphism& m) {
  return {{"kind", "system_morphism"},
          {"source", to_json(m.source())},
          {"target", to_json(m.target())},
          {"events", detail::event_map(m.source().monoid(), m.target().monoid(), m.events())},
          {"states", detail::state_map(m.source(), m.target(), m.states())}};
}

inline json to_json(const DiagramShape& s) {
  json arrows = json::array();
  for (const auto& a : s.arrows) arrows.push_back({{"name", a.name}, {"source", a.source}, {"target", a.target}});
  return {{"kind", "shape"}, {"objects", s.objects}, {"arrows", arrows}};
}

namespace detail {

template <class O, class A>
json diagram_json(const Diagram<O, A>& d, std::string_view over) {
  json objects = json::object(), arrows = json::object();
  for (std::size_t i = 0; i < d.objects.size() && i < d.shape.objects.size(); ++i)
    objects[d.shape.objects[i]] = to_json(d.objects[i]);
  for (std::size_t k = 0; k < d.arrows.size() && k < d.shape.arrows.size(); ++k)
    arrows[d.shape.arrows[k].name] = to_json(d.arrows[k]);
  return {{"kind", "diagram"}, {"over", over}, {"shape", to_json(d.shape)}, {"objects", objects}, {"arrows", arrows}};
}

}  // namespace detail

inline json to_json(const MonoidDiagram& d) { return detail::diagram_json(d, "monoid"); }
inline json to_json(const SpaceDiagram& d) { return detail::diagram_json(d, "space"); }
inline json to_json(const SystemDiagram& d) { return detail::diagram_json(d, "system"); }

inline json to_json(const MonoidTable& t) {
  json rows = json::array();
  for (const auto& row : t.table) {
    json r = json::array();
    for (std::size_t v : row) r.push_back(v < t.elements.size() ? t.elements[v] : std::to_string(v));
    rows.push_back(r);
  }
  return {{"kind", "monoid_table"}, {"elements", t.elements}, {"table", rows}};
}

inline json to_json(const Document& d) {
  return std::visit([](const auto& v) { return to_json(v); }, d);
}

// ---------------------------------------------------------------------------
// Parsing

/// Named documents, resolved eagerly.
class Bundle {
 public:
  const std::map<std::string, Document>& documents() const { return docs_; }

  bool contains(const std::string& name) const { return docs_.count(name) != 0; }

  const Document& at(const std::string& name) const {
    auto it = docs_.find(name);
    if (it == docs_.end()) throw Error(ErrorCode::dangling_reference, "no document named '" + name + "'");
    return it->second;
  }

  template <class T>
  const T& get(const std::string& name) const {
    const Document& d = at(name);
    if (const T* p = std::get_if<T>(&d)) return *p;
    throw Error(ErrorCode::schema_error, "document '" + name + "' has kind " + std::string(document_kind(d)));
  }

  void insert(const std::string& name, Document d) { docs_.insert_or_assign(name, std::move(d)); }

  json to_json() const {
    json docs = json::object();
    for (const auto& [name, d] : docs_) docs[name] = tracecat::to_json(d);
    return {{"version", kFormatVersion}, {"documents", docs}};
  }

 private:
  std::map<std::string, Document> docs_;
};

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::schema_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

inline std::string json_type(const json& j) { return j.type_name(); }

class Parser {
 public:
  explicit Parser(const json& raw) : raw_(raw) {}

  Bundle run() {
    if (!raw_.is_object()) schema_fail("", "expected an object");
    const json* version = find(raw_, "version");
    if (!version || !version->is_number_integer()) schema_fail("/version", "expected integer");
    if (version->get<long long>() != kFormatVersion)
      schema_fail("/version", "unsupported version " + version->dump());
    const json* docs = find(raw_, "documents");
    if (!docs || !docs->is_object()) schema_fail("/documents", "expected an object");
    for (auto it = docs->begin(); it != docs->end(); ++it) resolve(it.key());
    return std::move(out_);
  }

 private:
  const json& raw_;
  Bundle out_;
  std::set<std::string> active_;

  static const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  static const json& field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) schema_fail(path, "expected an object");
    const json* v = find(obj, key);
    if (!v) schema_fail(path, std::string("missing field '") + key + "'");
    return *v;
  }

  static std::string str(const json& j, const std::string& path) {
    if (!j.is_string()) schema_fail(path, "expected string, got " + json_type(j));
    return j.get<std::string>();
  }

  static std::vector<std::string> strings(const json& j, const std::string& path) {
    if (!j.is_array()) schema_fail(path, "expected array, got " + json_type(j));
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], path + "/" + std::to_string(i)));
    return out;
  }

  static std::string kind_of(const json& j, const std::string& path) { return str(field(j, path, "kind"), path + "/kind"); }

  const Document& resolve(const std::string& name) {
    if (out_.contains(name)) return out_.at(name);
    const json& docs = raw_["documents"];
    auto it = docs.find(name);
    if (it == docs.end()) throw Error(ErrorCode::dangling_reference, "no document named '" + name + "'");
    if (!active_.insert(name).second) schema_fail("/documents/" + name, "cyclic reference");
    Document d = parse(*it, "/documents/" + name);
    active_.erase(name);
    out_.insert(name, std::move(d));
    return out_.at(name);
  }

  template <class T>
  T ref(const json& j, const std::string& path, std::string_view expected) {
    if (!j.is_string() && !j.is_object()) schema_fail(path, "expected a document name or an inline document");
    Document d = j.is_string() ? resolve(j.get<std::string>()) : parse(j, path);
    if (T* p = std::get_if<T>(&d)) return std::move(*p);
    schema_fail(path, "expected a " + std::string(expected) + ", got " + std::string(document_kind(d)));
  }

  Document parse(const json& j, const std::string& path) {
    const std::string kind = kind_of(j, path);
    if (kind == "monoid") return monoid(j, path);
    if (kind == "hom") return hom(j, path);
    if (kind == "space") return space(j, path);
    if (kind == "space_morphism") return space_morphism(j, path);
    if (kind == "system") return system(j, path);
    if (kind == "system_morphism") return system_morphism(j, path);
    if (kind == "shape") return shape(j, path);
    if (kind == "diagram") return diagram(j, path);
    if (kind == "monoid_table") return table(j, path);
    schema_fail(path + "/kind", "unknown kind '" + kind + "'");
  }

  static TraceMonoid monoid(const json& j, const std::string& path) {
    auto events = strings(field(j, path, "events"), path + "/events");
    std::set<std::string> declared;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string p = path + "/events/" + std::to_string(i);
      try {
        TraceMonoid::validate_name(events[i]);
      } catch (const Error& e) {
        schema_fail(p, e.what());
      }
      if (!declared.insert(events[i]).second) schema_fail(p, "event '" + events[i] + "' declared twice");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    const json* ind = find(j, "independence");
    if (ind) {
      if (!ind->is_array()) schema_fail(path + "/independence", "expected array");
      for (std::size_t i = 0; i < ind->size(); ++i) {
        const std::string p = path + "/independence/" + std::to_string(i);
        auto pair = strings((*ind)[i], p);
        if (pair.size() != 2) schema_fail(p, "expected a pair of event names");
        for (const auto& e : pair)
          if (!declared.count(e)) schema_fail(p, "unknown event '" + e + "'");
        pairs.emplace_back(pair[0], pair[1]);
      }
    }
    return TraceMonoid::make(std::move(events), pairs);
  }

  static std::vector<EventId> events_map(const json& j, const std::string& path, const TraceMonoid& source,
                                         const TraceMonoid& target) {
    if (!j.is_object()) schema_fail(path, "expected an object");
    std::vector<EventId> image(source.size(), kEmpty);
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!source.find(it.key())) schema_fail(path, "unknown source event '" + it.key() + "'");
    for (EventId e = 0; e < source.size(); ++e) {
      const std::string p = path + "/" + source.name(e);
      auto it = j.find(source.name(e));
      if (it == j.end()) schema_fail(path, "no image for event '" + source.name(e) + "'");
      if (it->is_null()) continue;
      const std::string t = str(*it, p);
      if (t == "1") continue;
      auto id = target.find(t);
      if (!id) schema_fail(p, "unknown target event '" + t + "'");
      image[e] = *id;
    }
    return image;
  }

  template <class S, class T>
  static std::vector<StateId> states_map(const json& j, const std::string& path, const S& source, const T& target) {
    if (!j.is_object()) schema_fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!source.find_state(it.key()) || it.key() == "*") schema_fail(path, "unknown source state '" + it.key() + "'");
    std::vector<StateId> image(source.size(), kStar);
    for (StateId x = 0; x < source.size(); ++x) {
      const std::string& name = source.states()[x];
      auto it = j.find(name);
      if (it == j.end()) schema_fail(path, "no image for state '" + name + "'");
      auto y = target.find_state(str(*it, path + "/" + name));
      if (!y) schema_fail(path + "/" + name, "unknown target state '" + it->template get<std::string>() + "'");
      image[x] = *y;
    }
    return image;
  }

  static std::vector<std::string> state_names(const json& j, const std::string& path) {
    auto names = strings(j, path);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string p = path + "/" + std::to_string(i);
      try {
        TraceMonoid::validate_name(names[i]);
      } catch (const Error& e) {
        schema_fail(p, e.what());
      }
      if (!seen.insert(names[i]).second) schema_fail(p, "state '" + names[i] + "' declared twice");
    }
    return names;
  }

  BasicHom hom(const json& j, const std::string& path) {
    auto source = ref<TraceMonoid>(field(j, path, "source"), path + "/source", "monoid");
    auto target = ref<TraceMonoid>(field(j, path, "target"), path + "/target", "monoid");
    auto image = events_map(field(j, path, "map"), path + "/map", source, target);
    return BasicHom::unchecked(std::move(source), std::move(target), std::move(image));
  }

  StateSpace space(const json& j, const std::string& path) {
    auto m = ref<TraceMonoid>(field(j, path, "monoid"), path + "/monoid", "monoid");
    auto states = state_names(field(j, path, "states"), path + "/states");
    std::map<std::string, StateId> index;
    for (StateId x = 0; x < states.size(); ++x) index[states[x]] = x;
    std::vector<StateId> action(states.size() * m.size(), kStar);
    if (const json* a = find(j, "action")) {
      if (!a->is_object()) schema_fail(path + "/action", "expected an object");
      for (auto row = a->begin(); row != a->end(); ++row) {
        const std::string p = path + "/action/" + row.key();
        auto x = index.find(row.key());
        if (x == index.end()) schema_fail(p, "unknown state '" + row.key() + "'");
        if (!row->is_object()) schema_fail(p, "expected an object");
        for (auto cell = row->begin(); cell != row->end(); ++cell) {
          auto e = m.find(cell.key());
          if (!e) schema_fail(p, "unknown event '" + cell.key() + "'");
          const std::string y = str(*cell, p + "/" + cell.key());
          if (y == "*") continue;
          auto yi = index.find(y);
          if (yi == index.end()) schema_fail(p + "/" + cell.key(), "unknown state '" + y + "'");
          action[x->second * m.size() + *e] = yi->second;
        }
      }
    }
    return StateSpace(std::move(m), std::move(states), std::move(action));
  }

  SpaceMorphism space_morphism(const json& j, const std::string& path) {
    auto source = ref<StateSpace>(field(j, path, "source"), path + "/source", "space");
    auto target = ref<StateSpace>(field(j, path, "target"), path + "/target", "space");
    auto events = events_map(field(j, path, "events"), path + "/events", source.monoid(), target.monoid());
    auto states = states_map(field(j, path, "states"), path + "/states", source, target);
    BasicHom h = BasicHom::unchecked(source.monoid(), target.monoid(), std::move(events));
    return SpaceMorphism(std::move(source), std::move(target), std::move(h), std::move(states));
  }

  WeakAsyncSystem system(const json& j, const std::string& path) {
    auto m = ref<TraceMonoid>(field(j, path, "monoid"), path + "/monoid", "monoid");
    auto states = state_names(field(j, path, "states"), path + "/states");
    std::map<std::string, StateId> index;
    for (StateId x = 0; x < states.size(); ++x) index[states[x]] = x;
    auto lookup = [&](const std::string& s, const std::string& p) -> StateId {
      auto it = index.find(s);
      if (it == index.end()) schema_fail(p, "unknown state '" + s + "'");
      return it->second;
    };
    StateId initial = kStar;
    if (const json* init = find(j, "initial")) {
      const std::string s = str(*init, path + "/initial");
      if (s != "*") initial = lookup(s, path + "/initial");
    }
    std::vector<Transition> tr;
    if (const json* t = find(j, "transitions")) {
      if (!t->is_array()) schema_fail(path + "/transitions", "expected array");
      for (std::size_t i = 0; i < t->size(); ++i) {
        const std::string p = path + "/transitions/" + std::to_string(i);
        auto triple = strings((*t)[i], p);
        if (triple.size() != 3) schema_fail(p, "expected [source, event, target]");
        auto e = m.find(triple[1]);
        if (!e) schema_fail(p, "unknown event '" + triple[1] + "'");
        tr.push_back({lookup(triple[0], p), *e, lookup(triple[2], p)});
      }
    }
    return WeakAsyncSystem(std::move(m), std::move(states), initial, std::move(tr));
  }

  SystemMorphism system_morphism(const json& j, const std::string& path) {
    auto source = ref<WeakAsyncSystem>(field(j, path, "source"), path + "/source", "system");
    auto target = ref<WeakAsyncSystem>(field(j, path, "target"), path + "/target", "system");
    auto events = events_map(field(j, path, "events"), path + "/events", source.monoid(), target.monoid());
    auto states = states_map(field(j, path, "states"), path + "/states", source, target);
    return SystemMorphism(std::move(source), std::move(target), std::move(events), std::move(states));
  }

  static DiagramShape shape(const json& j, const std::string& path) {
    DiagramShape s;
    s.objects = strings(field(j, path, "objects"), path + "/objects");
    const json* arrows = find(j, "arrows");
    if (arrows) {
      if (!arrows->is_array()) schema_fail(path + "/arrows", "expected array");
      for (std::size_t i = 0; i < arrows->size(); ++i) {
        const std::string p = path + "/arrows/" + std::to_string(i);
        const json& a = (*arrows)[i];
        s.arrows.push_back({str(field(a, p, "name"), p + "/name"), str(field(a, p, "source"), p + "/source"),
                            str(field(a, p, "target"), p + "/target")});
      }
    }
    auto diags = validate_shape(s);
    if (!diags.empty()) schema_fail(path, diags.front());
    return s;
  }

  template <class O, class A>
  Diagram<O, A> diagram_of(const json& j, const std::string& path, DiagramShape s, std::string_view object_kind,
                           std::string_view arrow_kind) {
    Diagram<O, A> d{std::move(s), {}, {}};
    const json& objects = field(j, path, "objects");
    if (!objects.is_object()) schema_fail(path + "/objects", "expected an object");
    for (auto it = objects.begin(); it != objects.end(); ++it)
      if (!d.shape.object_index(it.key())) schema_fail(path + "/objects", "object '" + it.key() + "' is not in the shape");
    for (const auto& o : d.shape.objects) {
      auto it = objects.find(o);
      if (it == objects.end()) schema_fail(path + "/objects", "no assignment for object '" + o + "'");
      d.objects.push_back(ref<O>(*it, path + "/objects/" + o, object_kind));
    }
    const json* arrows = find(j, "arrows");
    const json empty = json::object();
    if (!arrows) arrows = &empty;
    if (!arrows->is_object()) schema_fail(path + "/arrows", "expected an object");
    std::set<std::string> names;
    for (const auto& a : d.shape.arrows) names.insert(a.name);
    for (auto it = arrows->begin(); it != arrows->end(); ++it)
      if (!names.count(it.key())) schema_fail(path + "/arrows", "arrow '" + it.key() + "' is not in the shape");
    for (const auto& a : d.shape.arrows) {
      auto it = arrows->find(a.name);
      if (it == arrows->end()) schema_fail(path + "/arrows", "no assignment for arrow '" + a.name + "'");
      d.arrows.push_back(ref<A>(*it, path + "/arrows/" + a.name, arrow_kind));
    }
    return d;
  }

  Document diagram(const json& j, const std::string& path) {
    const std::string over = str(field(j, path, "over"), path + "/over");
    DiagramShape s = ref<DiagramShape>(field(j, path, "shape"), path + "/shape", "shape");
    if (over == "monoid") return diagram_of<TraceMonoid, BasicHom>(j, path, std::move(s), "monoid", "hom");
    if (over == "space") return diagram_of<StateSpace, SpaceMorphism>(j, path, std::move(s), "space", "space_morphism");
    if (over == "system")
      return diagram_of<WeakAsyncSystem, SystemMorphism>(j, path, std::move(s), "system", "system_morphism");
    schema_fail(path + "/over", "expected monoid, space or system");
  }

  static MonoidTable table(const json& j, const std::string& path) {
    MonoidTable t;
    t.elements = strings(field(j, path, "elements"), path + "/elements");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < t.elements.size(); ++i)
      if (!index.emplace(t.elements[i], i).second) schema_fail(path + "/elements", "duplicate element '" + t.elements[i] + "'");
    const json& rows = field(j, path, "table");
    if (!rows.is_array()) schema_fail(path + "/table", "expected array");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string p = path + "/table/" + std::to_string(r);
      std::vector<std::size_t> row;
      for (const auto& name : strings(rows[r], p)) {
        auto it = index.find(name);
        if (it == index.end()) schema_fail(p, "unknown element '" + name + "'");
        row.push_back(it->second);
      }
      t.table.push_back(std::move(row));
    }
    return t;
  }
};

}  // namespace detail

/// Throws ParseError (with line and column), SchemaError (with a JSON
/// pointer to the offending value) or DanglingReference.
inline Bundle parse_bundle(const json& j) { return detail::Parser(j).run(); }

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto col = what.find("column "); col != std::string::npos)
      if (auto pos = what.find(": ", col); pos != std::string::npos) what = what.substr(pos + 2);
    throw Error(ErrorCode::parse_error,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
  }
}

inline Bundle parse_bundle_text(std::string_view text) { return parse_bundle(parse_json(text)); }

/// Parses a single document, resolving references against `context`.
inline Document parse_document(const json& doc, const Bundle& context = {}) {
  json docs = json::object();
  for (const auto& [name, d] : context.documents()) docs[name] = to_json(d);
  std::string name = "document";
  while (docs.contains(name)) name += "'";
  docs[name] = doc;
  return parse_bundle(json{{"version", kFormatVersion}, {"documents", docs}}).at(name);
}

}  // namespace tracecat

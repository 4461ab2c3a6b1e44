#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tracecat/tracecat.hpp"

using namespace tracecat;

namespace {

struct Options {
  std::string category;
  std::size_t bound = 8;
  std::size_t depth = 3;
  std::string output;
  std::string format = "json";
};

struct Report {
  json result = json::object();
  Bundle documents;
};

struct Context {
  Options opts;
  Bundle bundle;
  std::vector<std::string> args;

  Category category(Category fallback) const {
    if (opts.category.empty()) return fallback;
    return *parse_category(opts.category);
  }

  const std::string& arg(std::size_t i) const {
    if (i >= args.size()) throw CLI::ValidationError("missing argument " + std::to_string(i + 1));
    return args[i];
  }

  template <class T>
  std::vector<T> all() const {
    std::vector<T> out;
    for (const auto& a : args) out.push_back(bundle.get<T>(a));
    return out;
  }
};

using Handler = std::function<Report(const Context&)>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Leg>
void add_legs(Report& r, const std::vector<Leg>& legs, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < legs.size(); ++i) r.documents.insert("leg:" + names[i], legs[i]);
}

std::vector<std::string> indexed(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

json monoid_summary(const TraceMonoid& m) {
  json pairs = json::array();
  for (auto [a, b] : m.independent_pairs()) pairs.push_back({m.name(a), m.name(b)});
  return {{"events", m.events()}, {"independence", pairs}};
}

Report monoid_cone(const MonoidCone& c, const std::vector<std::string>& names) {
  Report r;
  r.result["apex"] = monoid_summary(c.apex);
  r.documents.insert("apex", c.apex);
  add_legs(r, c.legs, names);
  return r;
}

Report monoid_cocone(const MonoidCocone& c, const std::vector<std::string>& names) {
  Report r;
  r.result["apex"] = monoid_summary(c.apex);
  r.documents.insert("apex", c.apex);
  add_legs(r, c.legs, names);
  return r;
}

Report space_cone(const SpaceCone& c, const std::vector<std::string>& names) {
  Report r;
  r.result["monoid"] = monoid_summary(c.apex.monoid());
  r.result["states"] = c.apex.states();
  r.documents.insert("apex", c.apex);
  add_legs(r, c.legs, names);
  return r;
}

json saturation_summary(const SpaceColimit& c, std::size_t bound) {
  const auto& sat = c.saturation;
  json classes = json::object();
  for (StateId g = 0; g < c.presentation.generators.size(); ++g)
    classes[c.presentation.generators[g]] = sat.space.state_name(sat.class_map[g]);
  json frontier = json::array();
  for (const auto& t : sat.frontier) frontier.push_back(render_term(c.presentation, t));
  json reps = json::object();
  for (StateId x = 0; x < sat.representatives.size(); ++x)
    reps[sat.space.states()[x]] = render_term(c.presentation, sat.representatives[x]);
  return {{"status", status_name(sat.status)},
          {"bound", bound},
          {"classes", classes},
          {"representatives", reps},
          {"frontier", frontier}};
}

Report system_cone(const SystemCone& c, const std::vector<std::string>& names) {
  Report r;
  r.result["class"] = system_class_name(classify(c.apex));
  r.result["states"] = c.apex.size();
  r.result["initial"] = c.apex.state_name(c.apex.initial());
  r.documents.insert("apex", c.apex);
  add_legs(r, c.legs, names);
  return r;
}

// ---------------------------------------------------------------------------

Report cmd_normalize(const Context& c) {
  const auto& m = c.bundle.get<TraceMonoid>(c.arg(0));
  std::string text;
  for (std::size_t i = 1; i < c.args.size(); ++i) text += (i > 1 ? " " : "") + c.args[i];
  Trace t = normalize(m, m.parse_word(text));
  Report r;
  r.result = {{"input", text}, {"normal_form", t.str()}, {"length", t.length()}};
  return r;
}

Report cmd_equiv(const Context& c) {
  const auto& m = c.bundle.get<TraceMonoid>(c.arg(0));
  const Word w1 = m.parse_word(c.arg(1)), w2 = m.parse_word(c.arg(2));
  Report r;
  r.result = {{"equivalent", equivalent(m, w1, w2)},
              {"normal_forms", {normalize(m, w1).str(), normalize(m, w2).str()}}};
  return r;
}

Report cmd_hom_check(const Context& c) {
  const auto& h = c.bundle.get<BasicHom>(c.arg(0));
  json violations = json::array();
  for (auto [a, b] : h.violations()) violations.push_back({h.source().name(a), h.source().name(b)});
  Report r;
  r.result = {{"valid", h.is_valid()},
              {"independence_preserving", h.is_valid() && is_independence_preserving(h)},
              {"violations", violations}};
  return r;
}

Report cmd_monoid_product(const Context& c) {
  auto ms = c.all<TraceMonoid>();
  return monoid_cone(product(ms, c.category(Category::fpcm)), indexed(ms.size()));
}

Report cmd_monoid_coproduct(const Context& c) {
  auto ms = c.all<TraceMonoid>();
  return monoid_cocone(coproduct(ms, c.category(Category::fpcm)), indexed(ms.size()));
}

Report cmd_monoid_equalize(const Context& c) {
  auto cone = equalizer(c.bundle.get<BasicHom>(c.arg(0)), c.bundle.get<BasicHom>(c.arg(1)), c.category(Category::fpcm));
  return monoid_cone(cone, {"0"});
}

Report cmd_monoid_coequalize(const Context& c) {
  auto co = coequalizer(c.bundle.get<BasicHom>(c.arg(0)), c.bundle.get<BasicHom>(c.arg(1)), c.category(Category::fpcm));
  return monoid_cocone(co, {"0"});
}

Report cmd_monoid_limit(const Context& c) {
  const auto& d = c.bundle.get<MonoidDiagram>(c.arg(0));
  return monoid_cone(limit(d, c.category(Category::fpcm)), d.shape.objects);
}

Report cmd_monoid_colimit(const Context& c) {
  const auto& d = c.bundle.get<MonoidDiagram>(c.arg(0));
  return monoid_cocone(colimit(d, c.category(Category::fpcm)), d.shape.objects);
}

Report cmd_radjoint(const Context& c) {
  const auto& t = c.bundle.get<MonoidTable>(c.arg(0));
  RightAdjoint ra = right_adjoint(t);
  Report r;
  json counit = json::object();
  for (EventId g = 0; g < ra.counit.size(); ++g) counit[ra.monoid.name(g)] = t.elements[ra.counit[g]];
  r.result = {{"apex", monoid_summary(ra.monoid)}, {"identity", t.elements[ra.identity]}, {"counit", counit}};
  r.documents.insert("apex", ra.monoid);
  return r;
}

Report cmd_space_product(const Context& c) {
  auto ss = c.all<StateSpace>();
  return space_cone(product(ss, c.category(Category::fpcm)), indexed(ss.size()));
}

Report cmd_space_equalize(const Context& c) {
  auto cone = equalizer(c.bundle.get<SpaceMorphism>(c.arg(0)), c.bundle.get<SpaceMorphism>(c.arg(1)),
                        c.category(Category::fpcm));
  return space_cone(cone, {"0"});
}

Report cmd_space_limit(const Context& c) {
  const auto& d = c.bundle.get<SpaceDiagram>(c.arg(0));
  return space_cone(limit(d, c.category(Category::fpcm)), d.shape.objects);
}

Report cmd_space_colimit(const Context& c) {
  const auto& d = c.bundle.get<SpaceDiagram>(c.arg(0));
  SpaceColimit col = colimit(d, c.category(Category::fpcm), c.opts.bound);
  Report r;
  r.result["saturation"] = saturation_summary(col, c.opts.bound);
  r.result["monoid"] = monoid_summary(col.monoid_cocone.apex);
  r.result["states"] = col.saturation.space.states();
  r.documents.insert("apex", col.saturation.space);
  add_legs(r, col.legs, d.shape.objects);
  return r;
}

Report cmd_asys_validate(const Context& c) {
  const auto& a = c.bundle.get<WeakAsyncSystem>(c.arg(0));
  auto diags = validate_system(a);
  Report r;
  r.result = {{"valid", diags.empty()}, {"violations", diags}};
  return r;
}

Report cmd_asys_classify(const Context& c) {
  const auto& a = c.bundle.get<WeakAsyncSystem>(c.arg(0));
  auto diags = validate_system(a);
  if (!diags.empty()) throw Error(ErrorCode::invalid_system, diags.front());
  Report r;
  r.result = {{"class", system_class_name(classify(a))}};
  return r;
}

Report cmd_asys_morphism_check(const Context& c) {
  const auto& m = c.bundle.get<SystemMorphism>(c.arg(0));
  json violations = json::array();
  for (const auto& v : morphism_violations(m)) violations.push_back({{"condition", v.condition}, {"detail", v.detail}});
  Report r;
  r.result = {{"morphism", violations.empty()}, {"violations", violations}};
  return r;
}

Report cmd_asys_polygonal_check(const Context& c) {
  const auto& m = c.bundle.get<SystemMorphism>(c.arg(0));
  for (const auto* sys : {&m.source(), &m.target()}) {
    auto diags = validate_system(*sys);
    if (!diags.empty()) throw Error(ErrorCode::invalid_system, diags.front());
  }
  const bool criterion = is_polygonal(m);
  const bool definitional = is_polygonal_by_equivariance(m);
  Report r;
  r.result = {{"polygonal", criterion && definitional}, {"criterion", criterion}, {"equivariance", definitional}};
  return r;
}

Report cmd_asys_product(const Context& c) {
  auto as = c.all<WeakAsyncSystem>();
  return system_cone(product(as, c.category(Category::fpcm_par)), indexed(as.size()));
}

Report cmd_asys_limit(const Context& c) {
  const auto& d = c.bundle.get<SystemDiagram>(c.arg(0));
  return system_cone(limit(d, c.category(Category::fpcm_par)), d.shape.objects);
}

Report cmd_asys_colimit(const Context& c) {
  const auto& d = c.bundle.get<SystemDiagram>(c.arg(0));
  SystemColimit col = colimit(d, c.category(Category::fpcm_par), c.opts.bound);
  Report r;
  r.result["saturation"] = saturation_summary(col.space_colimit, c.opts.bound);
  r.result["initial"] = col.apex.state_name(col.apex.initial());
  r.result["class"] = system_class_name(classify(col.apex));
  r.documents.insert("apex", col.apex);
  add_legs(r, col.legs, d.shape.objects);
  return r;
}

Report cmd_asys_reach(const Context& c) {
  WeakAsyncSystem a = reachable(c.bundle.get<WeakAsyncSystem>(c.arg(0)));
  Report r;
  r.result = {{"states", a.states()}};
  r.documents.insert("reachable", a);
  return r;
}

Report cmd_asys_unfold(const Context& c) {
  const auto& a = c.bundle.get<WeakAsyncSystem>(c.arg(0));
  json traces = json::array();
  for (const auto& [t, s] : unfold(a, c.opts.depth)) traces.push_back({{"trace", t.str()}, {"state", a.state_name(s)}});
  Report r;
  r.result = {{"depth", c.opts.depth}, {"traces", traces}};
  return r;
}

Report cmd_iso_check(const Context& c) {
  const Document& a = c.bundle.at(c.arg(0));
  const Document& b = c.bundle.at(c.arg(1));
  Report r;
  if (auto* m1 = std::get_if<TraceMonoid>(&a)) {
    const auto& m2 = c.bundle.get<TraceMonoid>(c.arg(1));
    auto iso = monoid_isomorphism(*m1, m2);
    r.result["isomorphic"] = iso.has_value();
    if (iso) {
      json events = json::object();
      for (EventId e = 0; e < iso->size(); ++e) events[m1->name(e)] = m2.name((*iso)[e]);
      r.result["witness"] = {{"events", events}};
    }
    return r;
  }
  if (auto* s1 = std::get_if<StateSpace>(&a)) {
    const auto& s2 = c.bundle.get<StateSpace>(c.arg(1));
    auto iso = is_isomorphic(*s1, s2);
    r.result["isomorphic"] = iso.has_value();
    if (iso) {
      json events = json::object(), states = json::object();
      for (EventId e = 0; e < iso->events.size(); ++e) events[s1->monoid().name(e)] = s2.monoid().name(iso->events[e]);
      for (StateId x = 0; x < iso->states.size(); ++x) states[s1->states()[x]] = s2.states()[iso->states[x]];
      r.result["witness"] = {{"events", events}, {"states", states}};
    }
    return r;
  }
  throw Error(ErrorCode::schema_error, "iso-check expects two monoids or two spaces, got " +
                                           std::string(document_kind(a)) + " and " + std::string(document_kind(b)));
}

// ---------------------------------------------------------------------------

std::string render_text(const std::string& command, const json& out) {
  std::ostringstream os;
  os << command << ": " << out.at("status").get<std::string>() << "\n";
  if (out.contains("error")) {
    os << out["error"]["code"].get<std::string>() << ": " << out["error"]["message"].get<std::string>() << "\n";
    return os.str();
  }
  for (auto it = out["result"].begin(); it != out["result"].end(); ++it)
    os << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  for (auto it = out["documents"].begin(); it != out["documents"].end(); ++it) os << "[" << it.key() << "] " << it->dump() << "\n";
  return os.str();
}

int emit(const Options& opts, const std::string& command, const json& out) {
  const std::string text = opts.format == "text" ? render_text(command, out) : out.dump(2) + "\n";
  if (opts.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opts.output, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write '" << opts.output << "'\n";
      return 2;
    }
    f << text;
  }
  return 0;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::schema_error:
    case ErrorCode::dangling_reference:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tracecat: trace monoids, state spaces and asynchronous systems"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opts;
  std::string file;
  std::vector<std::string> args;
  app.add_option("--category", opts.category, "fpcm or fpcm-par")
      ->check(CLI::IsMember({"fpcm", "fpcm-par", "fpcm_par"}));
  app.add_option("--bound", opts.bound, "saturation depth bound")->capture_default_str();
  app.add_option("--depth", opts.depth, "unfolding depth")->capture_default_str();
  app.add_option("--output", opts.output, "write the report to this file");
  app.add_option("--format", opts.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  std::string selected;
  Handler handler;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& full, Handler h, const std::string& help) {
    auto* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("file", file, "bundle file")->required();
    sub->add_option("args", args, "document names and arguments");
    sub->callback([&, full, h] {
      selected = full;
      handler = h;
    });
  };
  auto group = [&](const std::string& name, const std::string& help) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };

  leaf(&app, "normalize", "normalize", cmd_normalize, "MONOID WORD: lexicographic normal form");
  leaf(&app, "equiv", "equiv", cmd_equiv, "MONOID W1 W2: trace equivalence");
  leaf(&app, "hom-check", "hom-check", cmd_hom_check, "HOM: basic / independence preserving");
  leaf(&app, "radjoint", "radjoint", cmd_radjoint, "TABLE: right adjoint of a finite monoid");
  leaf(&app, "iso-check", "iso-check", cmd_iso_check, "A B: isomorphism of monoids or spaces");

  auto* monoid = group("monoid", "constructions on trace monoids");
  leaf(monoid, "product", "monoid product", cmd_monoid_product, "M...");
  leaf(monoid, "coproduct", "monoid coproduct", cmd_monoid_coproduct, "M...");
  leaf(monoid, "equalize", "monoid equalize", cmd_monoid_equalize, "F G");
  leaf(monoid, "coequalize", "monoid coequalize", cmd_monoid_coequalize, "F G");
  leaf(monoid, "limit", "monoid limit", cmd_monoid_limit, "DIAGRAM");
  leaf(monoid, "colimit", "monoid colimit", cmd_monoid_colimit, "DIAGRAM");

  auto* space = group("space", "constructions on state spaces");
  leaf(space, "product", "space product", cmd_space_product, "S...");
  leaf(space, "equalize", "space equalize", cmd_space_equalize, "M1 M2");
  leaf(space, "limit", "space limit", cmd_space_limit, "DIAGRAM");
  leaf(space, "colimit", "space colimit", cmd_space_colimit, "DIAGRAM");

  auto* asys = group("asys", "weak asynchronous systems");
  leaf(asys, "validate", "asys validate", cmd_asys_validate, "SYSTEM");
  leaf(asys, "classify", "asys classify", cmd_asys_classify, "SYSTEM");
  leaf(asys, "morphism-check", "asys morphism-check", cmd_asys_morphism_check, "MORPHISM");
  leaf(asys, "polygonal-check", "asys polygonal-check", cmd_asys_polygonal_check, "MORPHISM");
  leaf(asys, "product", "asys product", cmd_asys_product, "SYSTEM...");
  leaf(asys, "limit", "asys limit", cmd_asys_limit, "DIAGRAM");
  leaf(asys, "colimit", "asys colimit", cmd_asys_colimit, "DIAGRAM");
  leaf(asys, "reach", "asys reach", cmd_asys_reach, "SYSTEM");
  leaf(asys, "unfold", "asys unfold", cmd_asys_unfold, "SYSTEM");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  json out = {{"version", kFormatVersion}, {"command", selected}};
  try {
    Context ctx{opts, parse_bundle_text(read_file(file)), args};
    Report r = handler(ctx);
    out["status"] = "ok";
    out["result"] = r.result;
    out["documents"] = r.documents.to_json()["documents"];
    return emit(opts, selected, out);
  } catch (const Error& e) {
    std::string message = e.what();
    const std::string prefix = std::string(error_code_name(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0) message = message.substr(prefix.size());
    out["status"] = "error";
    out["error"] = {{"code", error_code_name(e.code())}, {"message", message}};
    std::cerr << error_code_name(e.code()) << ": " << message << "\n";
    emit(opts, selected, out);
    return exit_code_for(e.code());
  } catch (const CLI::ValidationError& e) {
    out["status"] = "error";
    out["error"] = {{"code", "UsageError"}, {"message", e.what()}};
    std::cerr << "UsageError: " << e.what() << "\n";
    emit(opts, selected, out);
    return 2;
  }
}

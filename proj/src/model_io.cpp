#include "ssg/model_io.hpp"

#include <map>
#include <set>

#include "ssg/errors.hpp"

namespace ssg {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  return j;
}

std::vector<int> word(const json& j, const std::string& where) {
  std::vector<int> w;
  for (std::size_t i = 0; i < array(j, where).size(); ++i)
    w.push_back(static_cast<int>(integer(j[i], where + "/" + std::to_string(i))));
  return w;
}

}  // namespace

ModelDocument parse_document(const json& doc) {
  if (!doc.is_object()) throw ParseError("/: expected an object");
  if (doc.value("schema", std::string()) != kModelSchema)
    throw ParseError("/schema: expected \"" + std::string(kModelSchema) + "\"");
  const auto k = integer(field(doc, "k", "/"), "/k");
  if (k < 1 || k > 16) throw ParseError("/k: rank must be between 1 and 16");
  const auto nv = integer(field(doc, "vertices", "/"), "/vertices");
  if (nv < 1) throw ParseError("/vertices: need at least one vertex");

  std::vector<Edge> edges;
  std::map<std::pair<int, std::uint32_t>, EdgeId> by_label;
  const json& je = array(field(doc, "edges", "/"), "/edges");
  for (std::size_t i = 0; i < je.size(); ++i) {
    const std::string at = "/edges/" + std::to_string(i);
    const auto color = integer(field(je[i], "color", at), at + "/color");
    const auto id = integer(field(je[i], "id", at), at + "/id");
    const auto src = integer(field(je[i], "source", at), at + "/source");
    const auto rng = integer(field(je[i], "range", at), at + "/range");
    if (color < 1 || color > k) throw ParseError(at + "/color: outside 1.." + std::to_string(k));
    if (id < 0) throw ParseError(at + "/id: must be nonnegative");
    if (src < 0 || src >= nv || rng < 0 || rng >= nv) throw ParseError(at + ": endpoint is not a vertex");
    const Edge e{static_cast<int>(color - 1), static_cast<std::uint32_t>(id), static_cast<VertexId>(src),
                 static_cast<VertexId>(rng)};
    if (!by_label.emplace(std::pair{e.color, e.label}, static_cast<EdgeId>(edges.size())).second)
      throw ParseError(at + ": duplicate edge id " + std::to_string(id) + " in color " + std::to_string(color));
    edges.push_back(e);
  }
  auto lookup = [&](std::int64_t color, const json& id, const std::string& where) {
    const auto label = integer(id, where);
    auto it = by_label.find({static_cast<int>(color - 1), static_cast<std::uint32_t>(label)});
    if (label < 0 || it == by_label.end())
      throw ParseError(where + ": no edge with id " + std::to_string(label) + " in color " + std::to_string(color));
    return it->second;
  };

  std::vector<Square> squares;
  if (doc.contains("squares")) {
    const json& js = array(doc["squares"], "/squares");
    for (std::size_t i = 0; i < js.size(); ++i) {
      const std::string at = "/squares/" + std::to_string(i);
      const auto ci = integer(field(js[i], "i", at), at + "/i");
      const auto cj = integer(field(js[i], "j", at), at + "/j");
      if (!(1 <= ci && ci < cj && cj <= k)) throw ParseError(at + ": need 1 <= i < j <= k");
      squares.push_back({lookup(ci, field(js[i], "f", at), at + "/f"), lookup(cj, field(js[i], "g", at), at + "/g"),
                         lookup(cj, field(js[i], "gPrime", at), at + "/gPrime"),
                         lookup(ci, field(js[i], "fPrime", at), at + "/fPrime")});
    }
  }
  auto graph = std::make_shared<const KGraph>(static_cast<int>(k), static_cast<std::size_t>(nv), edges, squares);

  std::vector<GeneratorTable> tables;
  if (doc.contains("generators")) {
    const json& jg = array(doc["generators"], "/generators");
    for (std::size_t i = 0; i < jg.size(); ++i) {
      const std::string at = "/generators/" + std::to_string(i);
      GeneratorTable t;
      const json& name = field(jg[i], "name", at);
      if (!name.is_string()) throw ParseError(at + "/name: expected a string");
      t.name = name.get<std::string>();
      t.image.assign(edges.size(), 0);
      t.restriction.assign(edges.size(), {});
      std::vector<char> seen(edges.size(), 0);
      const json& ja = array(field(jg[i], "edgeAction", at), at + "/edgeAction");
      for (std::size_t r = 0; r < ja.size(); ++r) {
        const std::string rat = at + "/edgeAction/" + std::to_string(r);
        const auto color = integer(field(ja[r], "color", rat), rat + "/color");
        if (color < 1 || color > k) throw ParseError(rat + "/color: outside 1.." + std::to_string(k));
        const EdgeId e = lookup(color, field(ja[r], "edge", rat), rat + "/edge");
        if (seen[e]++) throw ParseError(rat + ": edge listed twice");
        // The image may carry its own color so that color changes are reported
        // by validation instead of rejected here.
        const auto image_color = ja[r].contains("imageColor") ? integer(ja[r]["imageColor"], rat + "/imageColor") : color;
        t.image[e] = lookup(image_color, field(ja[r], "image", rat), rat + "/image");
        t.restriction[e] = word(field(ja[r], "restriction", rat), rat + "/restriction");
      }
      for (EdgeId e = 0; e < edges.size(); ++e)
        if (!seen[e])
          throw ParseError(at + "/edgeAction: edge " + std::to_string(edges[e].label) + " of color " +
                           std::to_string(edges[e].color + 1) + " has no entry");
      if (jg[i].contains("vertexAction")) {
        std::vector<VertexId> vm;
        const json& jv = array(jg[i]["vertexAction"], at + "/vertexAction");
        for (std::size_t v = 0; v < jv.size(); ++v)
          vm.push_back(static_cast<VertexId>(integer(jv[v], at + "/vertexAction/" + std::to_string(v))));
        t.vertex_image = std::move(vm);
      }
      tables.push_back(std::move(t));
    }
  }
  ModelDocument out;
  out.graph = std::move(graph);
  out.tables = std::move(tables);
  if (doc.contains("metadata")) out.metadata = doc["metadata"];
  return out;
}

ModelDocument parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_document(doc);
}

ValidationReport validate_document(const ModelDocument& doc, ActionCaps caps) {
  ValidationReport rep = validate_kgraph(*doc.graph);
  rep.merge(validate_generator_tables(*doc.graph, doc.tables));
  if (!rep.ok()) return rep;
  ActionSystem sys = ActionSystem::from_tables(doc.graph, doc.tables, caps);
  rep.merge(validate_action(sys));
  return rep;
}

ActionSystem build_model(const ModelDocument& doc, ActionCaps caps) {
  const ValidationReport rep = validate_document(doc, caps);
  if (!rep.ok()) {
    std::string msg;
    for (const auto& s : rep.issues) msg += (msg.empty() ? "" : "; ") + s;
    throw ValidationError(msg);
  }
  return ActionSystem::from_tables(doc.graph, doc.tables, caps);
}

ActionSystem parse_model(std::string_view text, ActionCaps caps) { return build_model(parse_document(text), caps); }

json emit_model(const ActionSystem& sys, const json& metadata) {
  const KGraph& g = sys.graph();
  json doc;
  doc["schema"] = kModelSchema;
  doc["k"] = g.k();
  doc["vertices"] = g.num_vertices();
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"color", e.color + 1}, {"id", e.label}, {"source", e.source}, {"range", e.range}});
  doc["edges"] = std::move(edges);
  json squares = json::array();
  for (const Square& s : g.squares())
    squares.push_back({{"i", g.edge(s.f).color + 1},
                       {"j", g.edge(s.g).color + 1},
                       {"f", g.edge(s.f).label},
                       {"g", g.edge(s.g).label},
                       {"gPrime", g.edge(s.g2).label},
                       {"fPrime", g.edge(s.f2).label}});
  doc["squares"] = std::move(squares);
  json gens = json::array();
  for (const GeneratorTable& t : sys.tables()) {
    json actions = json::array();
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      json a = {{"color", g.edge(e).color + 1},
                {"edge", g.edge(e).label},
                {"image", g.edge(t.image[e]).label},
                {"restriction", t.restriction[e]}};
      if (g.edge(t.image[e]).color != g.edge(e).color) a["imageColor"] = g.edge(t.image[e]).color + 1;
      actions.push_back(std::move(a));
    }
    json jt = {{"name", t.name}, {"edgeAction", std::move(actions)}};
    if (t.vertex_image) jt["vertexAction"] = *t.vertex_image;
    gens.push_back(std::move(jt));
  }
  doc["generators"] = std::move(gens);
  doc["metadata"] = metadata.is_null() ? json::object() : metadata;
  return doc;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

json path_to_json(const KGraph& g, const Path& p) {
  json edges = json::array();
  for (EdgeId e : p.edges()) edges.push_back({g.edge(e).color + 1, g.edge(e).label});
  return {{"range", p.range()}, {"edges", std::move(edges)}};
}

Path path_from_json(const KGraph& g, const json& j) {
  const auto range = integer(field(j, "range", "path"), "path/range");
  const json& je = array(field(j, "edges", "path"), "path/edges");
  if (range < 0 || static_cast<std::size_t>(range) >= g.num_vertices()) throw ParseError("path/range: not a vertex");
  if (je.empty()) return g.vertex_path(static_cast<VertexId>(range));
  std::vector<EdgeId> edges;
  for (const auto& pair : je) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("path/edges: expected [color, id] pairs");
    const auto e = g.find_edge(static_cast<int>(integer(pair[0], "path/edges") - 1),
                               static_cast<std::uint32_t>(integer(pair[1], "path/edges")));
    if (!e) throw ParseError("path/edges: unknown edge");
    edges.push_back(*e);
  }
  if (g.edge(edges.front()).range != static_cast<VertexId>(range)) throw ParseError("path/range: does not match");
  return g.path_from_edges(edges);
}

json element_to_json(const ActionSystem& sys, const ComplexElement& a) {
  json out = json::array();
  for (const auto& [m, c] : a.terms())
    out.push_back({{"mu", path_to_json(sys.graph(), m.mu)},
                   {"g", sys.word_of(m.g)},
                   {"nu", path_to_json(sys.graph(), m.nu)},
                   {"re", c.real()},
                   {"im", c.imag()}});
  return out;
}

ComplexElement element_from_json(ActionSystem& sys, const json& j) {
  ComplexElement out;
  for (const auto& term : array(j, "element")) {
    const Path mu = path_from_json(sys.graph(), field(term, "mu", "element"));
    const Path nu = path_from_json(sys.graph(), field(term, "nu", "element"));
    const auto w = word(field(term, "g", "element"), "element/g");
    const GroupElement g = sys.element_from_word(w);
    if (mu.source() != sys.act_vertex(g, nu.source())) throw ParseError("element: s(mu) must equal g . s(nu)");
    const json& re = field(term, "re", "element");
    const double im = term.value("im", 0.0);
    if (!re.is_number()) throw ParseError("element/re: expected a number");
    out.add({mu, g, nu}, {re.get<double>(), im});
  }
  return out;
}

}  // namespace ssg

#include "tslkit/cfm.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <json.hpp>

#include "tslkit/error.hpp"

namespace tslkit {

std::string_view to_string(LogicOp op) noexcept {
  switch (op) {
    case LogicOp::And: return "and";
    case LogicOp::Or: return "or";
    case LogicOp::Not: return "not";
  }
  return "?";
}

VertexLabel VertexLabel::function(std::string name, std::size_t arity) {
  VertexLabel l;
  l.kind_ = Kind::Function;
  l.name_ = std::move(name);
  l.k_ = arity;
  return l;
}

VertexLabel VertexLabel::predicate(std::string name, std::size_t arity) {
  VertexLabel l = function(std::move(name), arity);
  l.kind_ = Kind::Predicate;
  return l;
}

VertexLabel VertexLabel::logic(LogicOp op) {
  VertexLabel l;
  l.kind_ = Kind::Logic;
  l.op_ = op;
  return l;
}

VertexLabel VertexLabel::one_hot(std::size_t k) {
  VertexLabel l;
  l.kind_ = Kind::OneHot;
  l.k_ = k;
  return l;
}

VertexLabel VertexLabel::mutex(std::size_t k) {
  VertexLabel l;
  l.kind_ = Kind::Mutex;
  l.k_ = k;
  return l;
}

std::size_t VertexLabel::arity() const noexcept {
  switch (kind_) {
    case Kind::Function:
    case Kind::Predicate:
    case Kind::OneHot: return k_;
    case Kind::Logic: return op_ == LogicOp::Not ? 1 : 2;
    case Kind::Mutex: return k_ + 1;
  }
  return 0;
}

std::string describe(const VertexLabel& l) {
  switch (l.kind()) {
    case VertexLabel::Kind::Function:
      return "function " + l.name() + "/" + std::to_string(l.arity());
    case VertexLabel::Kind::Predicate:
      return "predicate " + l.name() + "/" + std::to_string(l.arity());
    case VertexLabel::Kind::Logic: return "logic " + std::string(to_string(l.logic_op()));
    case VertexLabel::Kind::OneHot: return "onehot " + std::to_string(l.k());
    case VertexLabel::Kind::Mutex: return "mutex " + std::to_string(l.k());
  }
  return "?";
}

const std::vector<std::string>& Cfm::sources(const std::string& sink) const {
  static const std::vector<std::string> kNone;
  auto it = deps.find(sink);
  return it == deps.end() ? kNone : it->second;
}

std::string_view to_string(CfmViolation::Kind kind) noexcept {
  using K = CfmViolation::Kind;
  switch (kind) {
    case K::ArityMismatch: return "ArityMismatch";
    case K::MultipleWriters: return "MultipleWriters";
    case K::MissingWriter: return "MissingWriter";
    case K::DanglingReference: return "DanglingReference";
    case K::CellFreeCycle: return "CellFreeCycle";
    case K::NameClash: return "NameClash";
  }
  return "?";
}

// --- validation ---------------------------------------------------------------

namespace {

using Graph = std::map<std::string, std::vector<std::string>>;

// vertex -> vertex sources; cells and inputs cut every edge
Graph vertex_graph(const Cfm& m) {
  Graph g;
  for (const auto& [id, _] : m.vertices) {
    auto& out = g[id];
    for (const auto& src : m.sources(id)) {
      if (m.vertices.count(src) && !m.cells.count(src) && !m.inputs.count(src)) out.push_back(src);
    }
  }
  return g;
}

// Tarjan; components in discovery order with members sorted.
std::vector<std::vector<std::string>> strongly_connected(const Graph& g) {
  std::map<std::string, std::size_t> index, low;
  std::vector<std::string> stack;
  std::set<std::string> on_stack;
  std::vector<std::vector<std::string>> out;
  std::size_t next = 0;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : g.at(v)) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (const auto& [v, _] : g) {
    if (!index.count(v)) visit(v);
  }
  return out;
}

// Shortest dependency path from `start` back to itself inside `comp`.
std::vector<std::string> cycle_through(const Graph& g, const std::string& start,
                                       const std::set<std::string>& comp) {
  std::map<std::string, std::string> parent;
  std::deque<std::string> queue{start};
  std::set<std::string> seen{start};
  while (!queue.empty()) {
    std::string v = queue.front();
    queue.pop_front();
    for (const auto& w : g.at(v)) {
      if (!comp.count(w)) continue;
      if (w == start) {
        std::vector<std::string> path{start};
        for (std::string x = v; x != start; x = parent[x]) path.push_back(x);
        std::reverse(path.begin() + 1, path.end());
        path.push_back(start);
        return path;
      }
      if (seen.insert(w).second) {
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return {start, start};
}

}  // namespace

std::vector<CfmViolation> validate(const Cfm& m) {
  using K = CfmViolation::Kind;
  std::vector<CfmViolation> out;
  auto report = [&](K kind, std::string subject, std::string message) {
    out.push_back(CfmViolation{kind, std::move(subject), std::move(message), {}});
  };

  // name sets must be pairwise disjoint
  std::map<std::string, std::vector<std::string>> homes;
  for (const auto& n : m.inputs) homes[n].push_back("input");
  for (const auto& n : m.outputs) homes[n].push_back("output");
  for (const auto& n : m.cells) homes[n].push_back("cell");
  for (const auto& [n, _] : m.vertices) homes[n].push_back("vertex");
  for (const auto& [n, where] : homes) {
    if (where.size() > 1) {
      std::string list = where[0];
      for (std::size_t i = 1; i < where.size(); ++i) list += ", " + where[i];
      report(K::NameClash, n, "'" + n + "' is declared as " + list);
    }
  }

  for (const auto& [sink, _] : m.deps) {
    if (!m.outputs.count(sink) && !m.cells.count(sink) && !m.vertices.count(sink)) {
      report(K::DanglingReference, sink,
             m.inputs.count(sink) ? "input '" + sink + "' cannot have dependencies"
                                  : "dependencies given for undeclared sink '" + sink + "'");
    }
  }

  auto check_writer = [&](const std::string& sink, const char* what) {
    const auto& src = m.sources(sink);
    if (src.empty()) {
      report(K::MissingWriter, sink, std::string(what) + " '" + sink + "' has no source");
    } else if (src.size() > 1) {
      report(K::MultipleWriters, sink,
             std::string(what) + " '" + sink + "' has " + std::to_string(src.size()) + " sources");
    }
  };
  for (const auto& o : m.outputs) check_writer(o, "output");
  for (const auto& c : m.cells) check_writer(c, "cell");

  for (const auto& [id, label] : m.vertices) {
    const auto n = m.sources(id).size();
    if ((label.kind() == VertexLabel::Kind::OneHot || label.kind() == VertexLabel::Kind::Mutex) &&
        label.k() == 0) {
      report(K::ArityMismatch, id, "vertex '" + id + "' (" + describe(label) + ") needs k >= 1");
    } else if (n != label.arity()) {
      report(K::ArityMismatch, id,
             "vertex '" + id + "' (" + describe(label) + ") expects " + std::to_string(label.arity()) +
                 " source(s), has " + std::to_string(n));
    }
  }

  for (const auto& [sink, srcs] : m.deps) {
    for (std::size_t i = 0; i < srcs.size(); ++i) {
      const auto& s = srcs[i];
      const std::string at = "'" + sink + "' source " + std::to_string(i);
      if (m.outputs.count(s)) {
        report(K::DanglingReference, sink, at + " reads output '" + s + "'; outputs are not sources");
      } else if (!m.inputs.count(s) && !m.cells.count(s) && !m.vertices.count(s)) {
        report(K::DanglingReference, sink, at + " refers to undeclared '" + s + "'");
      }
    }
  }

  const Graph g = vertex_graph(m);
  for (const auto& comp : strongly_connected(g)) {
    const auto& head = comp.front();
    const auto& self = g.at(head);
    const bool self_loop = std::find(self.begin(), self.end(), head) != self.end();
    if (comp.size() == 1 && !self_loop) continue;
    std::set<std::string> members(comp.begin(), comp.end());
    CfmViolation v{K::CellFreeCycle, head, "", cycle_through(g, head, members)};
    std::string path;
    for (std::size_t i = 0; i < v.cycle.size(); ++i) path += (i ? " <- " : "") + v.cycle[i];
    v.message = "dependency cycle without a cell: " + path;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::string> topo_order(const Cfm& m, TieBreak tie) {
  const Graph g = vertex_graph(m);
  std::map<std::string, std::size_t> pending;
  std::map<std::string, std::vector<std::string>> readers;
  for (const auto& [v, srcs] : g) {
    pending[v] = srcs.size();
    for (const auto& s : srcs) readers[s].push_back(v);
  }
  std::set<std::string> ready;
  for (const auto& [v, n] : pending) {
    if (n == 0) ready.insert(v);
  }
  std::vector<std::string> order;
  order.reserve(g.size());
  while (!ready.empty()) {
    auto it = tie == TieBreak::Forward ? ready.begin() : std::prev(ready.end());
    std::string v = *it;
    ready.erase(it);
    order.push_back(v);
    for (const auto& r : readers[v]) {
      if (--pending[r] == 0) ready.insert(r);
    }
  }
  if (order.size() != g.size()) {
    std::string stuck;
    for (const auto& [v, n] : pending) {
      if (n > 0) stuck += (stuck.empty() ? "" : ", ") + v;
    }
    throw Error(ErrorKind::CycleDetected, "vertices on a cell-free cycle: " + stuck);
  }
  return order;
}

// --- file format ----------------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, (path.empty() ? "/" : path) + ": " + msg);
}

std::set<std::string> read_names(const json& doc, const char* key) {
  const std::string path = std::string("/") + key;
  if (!doc.contains(key)) return {};
  const json& arr = doc.at(key);
  if (!arr.is_array()) schema(path, "expected an array of names");
  std::set<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) schema(path + "/" + std::to_string(i), "expected a name");
    if (!out.insert(arr[i].get<std::string>()).second) {
      schema(path + "/" + std::to_string(i), "duplicate name '" + arr[i].get<std::string>() + "'");
    }
  }
  return out;
}

std::size_t read_count(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) schema(path, std::string("missing field '") + key + "'");
  const json& n = obj.at(key);
  if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<std::int64_t>() >= 0)) {
    schema(path + "/" + key, "expected a non-negative integer");
  }
  return n.get<std::size_t>();
}

std::string read_string(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) schema(path, std::string("missing field '") + key + "'");
  if (!obj.at(key).is_string()) schema(path + "/" + key, "expected a string");
  return obj.at(key).get<std::string>();
}

VertexLabel read_label(const json& v, const std::string& path) {
  if (!v.is_object()) schema(path, "expected a vertex object");
  const std::string kind = read_string(v, path, "kind");
  if (kind == "function" || kind == "predicate") {
    auto name = read_string(v, path, "name");
    auto arity = read_count(v, path, "arity");
    return kind == "function" ? VertexLabel::function(name, arity)
                              : VertexLabel::predicate(name, arity);
  }
  if (kind == "logic") {
    const std::string op = read_string(v, path, "op");
    if (op == "and") return VertexLabel::logic(LogicOp::And);
    if (op == "or") return VertexLabel::logic(LogicOp::Or);
    if (op == "not") return VertexLabel::logic(LogicOp::Not);
    schema(path + "/op", "unknown logic operator '" + op + "'");
  }
  if (kind == "onehot") return VertexLabel::one_hot(read_count(v, path, "k"));
  if (kind == "mutex") return VertexLabel::mutex(read_count(v, path, "k"));
  schema(path + "/kind", "unknown vertex kind '" + kind + "'");
}

json write_label(const VertexLabel& l) {
  json j;
  switch (l.kind()) {
    case VertexLabel::Kind::Function:
    case VertexLabel::Kind::Predicate:
      j["kind"] = l.kind() == VertexLabel::Kind::Function ? "function" : "predicate";
      j["name"] = l.name();
      j["arity"] = l.arity();
      break;
    case VertexLabel::Kind::Logic:
      j["kind"] = "logic";
      j["op"] = std::string(to_string(l.logic_op()));
      break;
    case VertexLabel::Kind::OneHot:
      j["kind"] = "onehot";
      j["k"] = l.k();
      break;
    case VertexLabel::Kind::Mutex:
      j["kind"] = "mutex";
      j["k"] = l.k();
      break;
  }
  return j;
}

}  // namespace

Cfm read_cfm(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("", "expected an object");
  static const std::set<std::string> kKeys = {"v", "inputs", "outputs", "cells", "vertices", "deps"};
  for (const auto& [k, _] : doc.items()) {
    if (!kKeys.count(k)) schema("/" + k, "unknown field");
  }
  if (doc.contains("v") && doc["v"] != 1) schema("/v", "unsupported version " + doc["v"].dump());

  Cfm m;
  m.inputs = read_names(doc, "inputs");
  m.outputs = read_names(doc, "outputs");
  m.cells = read_names(doc, "cells");
  if (doc.contains("vertices")) {
    const json& vs = doc["vertices"];
    if (!vs.is_object()) schema("/vertices", "expected an object");
    for (const auto& [id, v] : vs.items()) m.vertices.emplace(id, read_label(v, "/vertices/" + id));
  }
  auto defined = [&](const std::string& id) {
    return m.inputs.count(id) || m.outputs.count(id) || m.cells.count(id) || m.vertices.count(id);
  };
  if (doc.contains("deps")) {
    const json& ds = doc["deps"];
    if (!ds.is_object()) schema("/deps", "expected an object");
    for (const auto& [sink, srcs] : ds.items()) {
      const std::string path = "/deps/" + sink;
      if (!defined(sink)) schema(path, "undefined id '" + sink + "'");
      if (!srcs.is_array()) schema(path, "expected an array of ids");
      std::vector<std::string> list;
      for (std::size_t i = 0; i < srcs.size(); ++i) {
        const std::string at = path + "/" + std::to_string(i);
        if (!srcs[i].is_string()) schema(at, "expected an id");
        auto id = srcs[i].get<std::string>();
        if (!defined(id)) schema(at, "undefined id '" + id + "'");
        list.push_back(std::move(id));
      }
      m.deps.emplace(sink, std::move(list));
    }
  }
  return m;
}

std::string write_cfm(const Cfm& m) {
  json doc;
  doc["v"] = 1;
  doc["inputs"] = m.inputs;
  doc["outputs"] = m.outputs;
  doc["cells"] = m.cells;
  doc["vertices"] = json::object();
  for (const auto& [id, l] : m.vertices) doc["vertices"][id] = write_label(l);
  doc["deps"] = json::object();
  for (const auto& [sink, srcs] : m.deps) doc["deps"][sink] = srcs;
  return doc.dump(2) + "\n";
}

}  // namespace tslkit

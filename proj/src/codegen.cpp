#include "tslkit/codegen.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "tslkit/error.hpp"

namespace tslkit {

std::string_view to_string(GenStyle s) noexcept {
  switch (s) {
    case GenStyle::Arrowized: return "arrow";
    case GenStyle::Monadic: return "monad";
    case GenStyle::ApplicativeClocked: return "applicative";
  }
  return "?";
}

std::optional<GenStyle> parse_style(std::string_view name) noexcept {
  if (name == "arrow") return GenStyle::Arrowized;
  if (name == "monad") return GenStyle::Monadic;
  if (name == "applicative") return GenStyle::ApplicativeClocked;
  return std::nullopt;
}

namespace {

bool digits_after(const std::string& s, std::size_t from) {
  if (s.size() <= from) return false;
  for (std::size_t i = from; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

bool starts_with(const std::string& s, std::string_view p) { return s.rfind(p, 0) == 0; }

}  // namespace

std::string literal_ident(const std::string& literal) {
  static const std::set<std::string> kReserved = {
      // keywords
      "case", "class", "data", "default", "deriving", "do", "else", "foreign", "if", "import", "in",
      "infix", "infixl", "infixr", "instance", "let", "module", "newtype", "of", "then", "type",
      "where", "proc", "rec", "mdo", "forall",
      // names the templates use
      "control", "cell", "arr", "returnA", "oneHot", "select", "not", "pure", "return", "sequenceA",
      "const", "uncurry", "error", "zip"};
  const bool clash = kReserved.count(literal) || literal.empty() ||
                     !std::islower(static_cast<unsigned char>(literal[0])) ||
                     (literal[0] == 'v' && digits_after(literal, 1)) ||
                     (literal[0] == 'x' && digits_after(literal, 1)) || starts_with(literal, "c_") ||
                     starts_with(literal, "i_") || starts_with(literal, "init_") ||
                     starts_with(literal, "lit_");
  return clash ? "lit_" + literal : literal;
}

namespace {

// Union-find over type slots; a class may be pinned to Bool or Int.
class Types {
 public:
  int slot(const std::string& key) {
    auto [it, fresh] = ids_.emplace(key, static_cast<int>(parent_.size()));
    if (fresh) {
      parent_.push_back(it->second);
      pinned_.emplace_back();
    }
    return it->second;
  }

  void unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    if (pinned_[a].empty()) pinned_[a] = pinned_[b];
  }

  void pin(int a, const char* type) {
    a = find(a);
    if (pinned_[a].empty()) pinned_[a] = type;
  }

  // Concrete type or a variable named in order of first request.
  std::string name(int a) {
    a = find(a);
    if (!pinned_[a].empty()) return pinned_[a];
    auto [it, fresh] = names_.emplace(a, "");
    if (fresh) it->second = "t" + std::to_string(names_.size() - 1);
    return it->second;
  }

 private:
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }

  std::map<std::string, int> ids_;
  std::vector<int> parent_;
  std::vector<std::string> pinned_;
  std::map<int, std::string> names_;
};

struct Literal {
  std::size_t arity = 0;
};

std::string tuple(const std::vector<std::string>& xs) {
  if (xs.empty()) return "()";
  if (xs.size() == 1) return xs[0];
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s + ")";
}

std::string list(const std::vector<std::string>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s + "]";
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

// Everything the three renderings share.
class Model {
 public:
  explicit Model(const Cfm& m) : m_(m), order_(topo_order(m)) {
    for (std::size_t i = 0; i < order_.size(); ++i) wire_[order_[i]] = "v" + std::to_string(i);
    for (const auto& c : m.cells) wire_[c] = "c_" + c;
    for (const auto& in : m.inputs) wire_[in] = "i_" + in;
    for (const auto& [id, l] : m.vertices) {
      if (l.kind() == VertexLabel::Kind::Function || l.kind() == VertexLabel::Kind::Predicate) {
        literals_.emplace(l.name(), Literal{l.arity()});
      }
    }
    infer();
  }

  const Cfm& cfm() const { return m_; }
  const std::vector<std::string>& order() const { return order_; }
  const std::map<std::string, Literal>& literals() const { return literals_; }
  const std::string& wire(const std::string& id) const { return wire_.at(id); }

  std::string wire_type(const std::string& id) { return types_.name(types_.slot("w:" + id)); }

  std::string literal_type(const std::string& name) {
    const auto& lit = literals_.at(name);
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < lit.arity; ++i) {
      parts.push_back(types_.name(types_.slot("l:" + name + ":" + std::to_string(i))));
    }
    parts.push_back(types_.name(types_.slot("l:" + name + ":r")));
    if (parts.size() == 1) return parts[0];
    return "(" + join(parts, " -> ") + ")";
  }

  bool uses(VertexLabel::Kind k) const {
    for (const auto& [_, l] : m_.vertices) {
      if (l.kind() == k) return true;
    }
    return false;
  }

  std::vector<std::string> result_wires() const {
    std::vector<std::string> out;
    for (const auto& c : m_.cells) out.push_back(wire(c));
    for (const auto& o : m_.outputs) out.push_back(wire(m_.sources(o).front()));
    return out;
  }

  std::string result_comment() const {
    std::vector<std::string> parts;
    for (const auto& c : m_.cells) parts.push_back(c + " (cell)");
    for (const auto& o : m_.outputs) parts.push_back(o + " (output)");
    return parts.empty() ? "no outputs" : join(parts, ", ");
  }

  std::vector<std::string> params() const {
    std::vector<std::string> out;
    if (!m_.cells.empty()) out.push_back("cell");
    for (const auto& [name, _] : literals_) out.push_back(literal_ident(name));
    for (const auto& c : m_.cells) out.push_back("init_" + c);
    return out;
  }

 private:
  void infer() {
    auto w = [&](const std::string& id) { return types_.slot("w:" + id); };
    // name slots in a stable order before unifying
    for (const auto& [name, lit] : literals_) {
      for (std::size_t i = 0; i < lit.arity; ++i) types_.slot("l:" + name + ":" + std::to_string(i));
      types_.slot("l:" + name + ":r");
    }
    for (const auto& id : order_) {
      const VertexLabel& l = m_.vertices.at(id);
      const auto& srcs = m_.sources(id);
      switch (l.kind()) {
        case VertexLabel::Kind::Function:
        case VertexLabel::Kind::Predicate: {
          const std::string base = "l:" + l.name() + ":";
          for (std::size_t i = 0; i < srcs.size(); ++i) {
            types_.unify(w(srcs[i]), types_.slot(base + std::to_string(i)));
          }
          types_.unify(w(id), types_.slot(base + "r"));
          if (l.kind() == VertexLabel::Kind::Predicate) types_.pin(w(id), "Bool");
          break;
        }
        case VertexLabel::Kind::Logic:
          for (const auto& s : srcs) types_.pin(w(s), "Bool");
          types_.pin(w(id), "Bool");
          break;
        case VertexLabel::Kind::OneHot:
          for (const auto& s : srcs) types_.pin(w(s), "Bool");
          types_.pin(w(id), "Int");
          break;
        case VertexLabel::Kind::Mutex:
          types_.pin(w(srcs[0]), "Int");
          for (std::size_t i = 1; i < srcs.size(); ++i) types_.unify(w(srcs[i]), w(id));
          break;
      }
    }
    for (const auto& c : m_.cells) types_.unify(w(c), w(m_.sources(c).front()));
    for (const auto& o : m_.outputs) types_.unify(w(o), w(m_.sources(o).front()));
  }

  const Cfm& m_;
  std::vector<std::string> order_;
  std::map<std::string, std::string> wire_;
  std::map<std::string, Literal> literals_;
  Types types_;
};

// --- signatures -------------------------------------------------------------------

struct Param {
  std::string type;
  std::string comment;
};

std::string render_signature(const std::string& constraint, const std::vector<Param>& params,
                             const Param& result) {
  std::ostringstream out;
  out << "control\n  :: " << constraint << "\n";
  const char* lead = "  => ";
  for (const auto& p : params) {
    out << lead << p.type << "  -- " << p.comment << "\n";
    lead = "  -> ";
  }
  out << lead << result.type << "  -- " << result.comment << "\n";
  return out.str();
}

std::string signature(Model& md, GenStyle s) {
  const Cfm& m = md.cfm();
  std::vector<Param> params;
  auto signal = [&](const std::string& t) -> std::string {
    switch (s) {
      case GenStyle::Monadic: return "signal " + t;
      case GenStyle::ApplicativeClocked: return "Signal domain " + t;
      default: return t;
    }
  };
  if (!m.cells.empty()) {
    std::string cell;
    switch (s) {
      case GenStyle::Arrowized: cell = "(forall p. p -> signalfunction p p)"; break;
      case GenStyle::Monadic: cell = "(forall p. p -> signal p -> monad (signal p))"; break;
      case GenStyle::ApplicativeClocked:
        cell = "(forall p. p -> Signal domain p -> Signal domain p)";
        break;
    }
    params.push_back({cell, "cell implementation"});
  }
  for (const auto& [name, _] : md.literals()) params.push_back({md.literal_type(name), name});
  for (const auto& c : m.cells) params.push_back({md.wire_type(c), "initial value: " + c});
  if (s == GenStyle::ApplicativeClocked) {
    for (const auto& o : m.outputs) params.push_back({md.wire_type(o), "initial value: " + o});
  }

  std::vector<std::string> ins, in_names, outs;
  for (const auto& i : m.inputs) {
    ins.push_back(md.wire_type(i));
    in_names.push_back(i);
  }
  for (const auto& c : m.cells) outs.push_back(signal(md.wire_type(c)));
  for (const auto& o : m.outputs) outs.push_back(signal(md.wire_type(o)));

  if (s == GenStyle::Arrowized) {
    const std::string comment =
        (in_names.empty() ? std::string("no inputs") : join(in_names, ", ")) + " -> " + md.result_comment();
    return render_signature("(Arrow signalfunction, ArrowLoop signalfunction)", params,
                            {"signalfunction " + tuple(ins) + " " + tuple(outs), comment});
  }
  for (std::size_t i = 0; i < ins.size(); ++i) params.push_back({signal(ins[i]), "input: " + in_names[i]});
  if (s == GenStyle::Monadic) {
    return render_signature("(MonadFix monad, Applicative signal)", params,
                            {"monad " + (outs.size() == 1 ? "(" + outs[0] + ")" : tuple(outs)), md.result_comment()});
  }
  return render_signature("HiddenClockReset domain gated synchronous", params,
                          {tuple(outs), md.result_comment()});
}

// --- bodies ---------------------------------------------------------------------------

enum class Phase { Cells, Applications, Controls, Selections };

const char* phase_comment(Phase p) {
  switch (p) {
    case Phase::Cells: return "-- gather values from the previous time step";
    case Phase::Applications: return "-- gather applications of functions and predicates";
    case Phase::Controls: return "-- compute control signals";
    case Phase::Selections: return "-- use control signals to select among applications";
  }
  return "";
}

Phase phase_of(const VertexLabel& l) {
  switch (l.kind()) {
    case VertexLabel::Kind::Function:
    case VertexLabel::Kind::Predicate: return Phase::Applications;
    case VertexLabel::Kind::Logic:
    case VertexLabel::Kind::OneHot: return Phase::Controls;
    case VertexLabel::Kind::Mutex: return Phase::Selections;
  }
  return Phase::Applications;
}

// One binding line without indentation.
struct Renderer {
  virtual ~Renderer() = default;
  virtual std::string cell(const std::string& wire, const std::string& init, const std::string& src) = 0;
  virtual std::string apply(const std::string& wire, const std::string& fn,
                            const std::vector<std::string>& args) = 0;
  virtual std::string one_hot(const std::string& wire, const std::vector<std::string>& args) = 0;
  virtual std::string select(const std::string& wire, const std::string& sel,
                             const std::vector<std::string>& data) = 0;
};

std::string op_name(LogicOp op) {
  switch (op) {
    case LogicOp::And: return "(&&)";
    case LogicOp::Or: return "(||)";
    case LogicOp::Not: return "not";
  }
  return "";
}

struct ArrowRenderer : Renderer {
  std::string cell(const std::string& w, const std::string& init, const std::string& src) override {
    return w + " <- cell " + init + " -< " + src;
  }
  std::string apply(const std::string& w, const std::string& fn,
                    const std::vector<std::string>& args) override {
    if (args.empty()) return w + " <- arr (const " + fn + ") -< ()";
    if (args.size() == 1) return w + " <- arr " + fn + " -< " + args[0];
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < args.size(); ++i) xs.push_back("x" + std::to_string(i));
    return w + " <- arr (\\" + tuple(xs) + " -> " + fn + " " + join(xs, " ") + ") -< " + tuple(args);
  }
  std::string one_hot(const std::string& w, const std::vector<std::string>& args) override {
    return w + " <- arr oneHot -< " + list(args);
  }
  std::string select(const std::string& w, const std::string& sel,
                     const std::vector<std::string>& data) override {
    return w + " <- arr (uncurry select) -< (" + sel + ", " + list(data) + ")";
  }
};

struct ApplicativeRenderer : Renderer {
  explicit ApplicativeRenderer(bool monadic) : monadic_(monadic) {}

  std::string bind(const std::string& w, const std::string& rhs) const {
    return (monadic_ ? "let " : "") + w + " = " + rhs;
  }
  static std::string lift(const std::string& fn, const std::vector<std::string>& args) {
    if (args.empty()) return "pure " + fn;
    std::string s = fn + " <$> " + args[0];
    for (std::size_t i = 1; i < args.size(); ++i) s += " <*> " + args[i];
    return s;
  }

  std::string cell(const std::string& w, const std::string& init, const std::string& src) override {
    return monadic_ ? w + " <- cell " + init + " " + src : w + " = cell " + init + " " + src;
  }
  std::string apply(const std::string& w, const std::string& fn,
                    const std::vector<std::string>& args) override {
    return bind(w, lift(fn, args));
  }
  std::string one_hot(const std::string& w, const std::vector<std::string>& args) override {
    return bind(w, "oneHot <$> sequenceA " + list(args));
  }
  std::string select(const std::string& w, const std::string& sel,
                     const std::vector<std::string>& data) override {
    return bind(w, "select <$> " + sel + " <*> sequenceA " + list(data));
  }

  bool monadic_;
};

// Bindings grouped by phase, with the phase comment ahead of each non-empty group.
std::vector<std::string> bindings(const Model& md, Renderer& r) {
  const Cfm& m = md.cfm();
  std::map<Phase, std::vector<std::string>> lines;
  for (const auto& c : m.cells) {
    lines[Phase::Cells].push_back(r.cell(md.wire(c), "init_" + c, md.wire(m.sources(c).front())));
  }
  for (const auto& id : md.order()) {
    const VertexLabel& l = m.vertices.at(id);
    std::vector<std::string> args;
    for (const auto& s : m.sources(id)) args.push_back(md.wire(s));
    std::string line;
    switch (l.kind()) {
      case VertexLabel::Kind::Function:
      case VertexLabel::Kind::Predicate: line = r.apply(md.wire(id), literal_ident(l.name()), args); break;
      case VertexLabel::Kind::Logic: line = r.apply(md.wire(id), op_name(l.logic_op()), args); break;
      case VertexLabel::Kind::OneHot: line = r.one_hot(md.wire(id), args); break;
      case VertexLabel::Kind::Mutex:
        line = r.select(md.wire(id), args[0], std::vector<std::string>(args.begin() + 1, args.end()));
        break;
    }
    lines[phase_of(l)].push_back(line);
  }
  std::vector<std::string> out;
  for (const auto& [phase, group] : lines) {
    out.push_back(phase_comment(phase));
    out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

std::string control(Model& md, GenStyle s) {
  const Cfm& m = md.cfm();
  std::vector<std::string> head{"control"};
  for (const auto& p : md.params()) head.push_back(p);
  std::vector<std::string> in_wires;
  for (const auto& i : m.inputs) in_wires.push_back(md.wire(i));
  const bool stateful = !m.cells.empty() || !m.vertices.empty();
  const std::string result = tuple(md.result_wires());

  std::ostringstream out;
  switch (s) {
    case GenStyle::Arrowized: {
      ArrowRenderer r;
      out << join(head, " ") << " = proc " << tuple(in_wires) << " -> do\n";
      if (stateful) {
        out << "  rec\n";
        for (const auto& line : bindings(md, r)) out << "    " << line << "\n";
      }
      out << "  returnA -< " << result << "\n";
      break;
    }
    case GenStyle::Monadic: {
      ApplicativeRenderer r(true);
      head.insert(head.end(), in_wires.begin(), in_wires.end());
      out << join(head, " ") << " = " << (stateful ? "mdo" : "do") << "\n";
      for (const auto& line : bindings(md, r)) out << "  " << line << "\n";
      out << "  return " << result << "\n";
      break;
    }
    case GenStyle::ApplicativeClocked: {
      ApplicativeRenderer r(false);
      for (const auto& o : m.outputs) head.push_back("init_" + o);
      head.insert(head.end(), in_wires.begin(), in_wires.end());
      out << join(head, " ") << " =\n  " << result << "\n";
      if (stateful) {
        out << "  where\n";
        for (const auto& line : bindings(md, r)) out << "    " << line << "\n";
      }
      break;
    }
  }
  return out.str();
}

void require_valid(const Cfm& m) {
  const auto problems = validate(m);
  if (!problems.empty()) {
    throw Error(ErrorKind::InvalidCfm, std::string(to_string(problems.front().kind)) + ": " +
                                           problems.front().message);
  }
}

}  // namespace

std::string gen_signature(const Cfm& m, GenStyle s) {
  require_valid(m);
  Model md(m);
  return signature(md, s);
}

std::string gen_control(const Cfm& m, GenStyle s) {
  require_valid(m);
  Model md(m);
  return control(md, s);
}

std::string generate(const Cfm& m, GenStyle s) {
  require_valid(m);
  Model md(m);
  std::ostringstream out;
  switch (s) {
    case GenStyle::Arrowized:
      out << "{-# LANGUAGE Arrows, RankNTypes #-}\n\nimport Control.Arrow\n\n";
      break;
    case GenStyle::Monadic:
      out << "{-# LANGUAGE RankNTypes, RecursiveDo #-}\n\nimport Control.Monad.Fix (MonadFix)\n\n";
      break;
    case GenStyle::ApplicativeClocked:
      out << "{-# LANGUAGE RankNTypes #-}\n\nimport Clash.Prelude (HiddenClockReset, Signal)\n\n";
      break;
  }
  out << "-- control block template, " << to_string(s) << " style\n";
  out << signature(md, s) << control(md, s);
  if (md.uses(VertexLabel::Kind::OneHot)) {
    out << "\noneHot :: [Bool] -> Int\n"
           "oneHot bs = case [i | (i, True) <- zip [1 ..] bs] of\n"
           "  [i] -> i\n"
           "  _ -> error \"oneHot: control signals are not mutually exclusive\"\n";
  }
  if (md.uses(VertexLabel::Kind::Mutex)) {
    out << "\nselect :: Int -> [a] -> a\n"
           "select i xs = xs !! (i - 1)\n";
  }
  return out.str();
}

}  // namespace tslkit

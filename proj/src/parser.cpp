#include "tslkit/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "tslkit/error.hpp"

namespace tslkit {

namespace {

// --- lexer -------------------------------------------------------------------

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Semi,
  Equals,
  Bang,
  AndAnd,
  OrOr,
  Arrow,      // ->
  Iff,        // <->
  Caret,      // ^
  LeftArrow,  // <-
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "X", "U", "W", "R", "F", "G", "true", "false", "initially", "always", "assume", "guarantee"};

bool is_keyword(std::string_view s) { return kKeywords.count(s) > 0; }

[[noreturn]] void fail(const std::string& msg, std::size_t line, std::size_t col,
                       ErrorKind kind = ErrorKind::SyntaxError) {
  throw SyntaxError(kind, msg, line, col);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };

  // UTF-8 byte order mark
  if (starts("\xEF\xBB\xBF")) i = 3;

  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (starts("--")) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    // longest match first
    static constexpr Sym kSyms[] = {
        {"<->", Tok::Iff}, {"->", Tok::Arrow}, {"<-", Tok::LeftArrow}, {"&&", Tok::AndAnd},
        {"||", Tok::OrOr}, {"(", Tok::LParen}, {")", Tok::RParen},     {"[", Tok::LBracket},
        {"]", Tok::RBracket}, {"{", Tok::LBrace}, {"}", Tok::RBrace},  {";", Tok::Semi},
        {"=", Tok::Equals},  {"!", Tok::Bang},   {"^", Tok::Caret},
    };
    bool matched = false;
    for (const auto& s : kSyms) {
      if (starts(s.text)) {
        t.kind = s.kind;
        t.text = std::string(s.text);
        advance(s.text.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::string shown = (static_cast<unsigned char>(c) < 0x80) ? std::string(1, c)
                                                                  : std::string("non-ASCII byte");
      fail("unexpected character '" + shown + "'", line, col);
    }
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// --- parser ------------------------------------------------------------------

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  SpecFile spec_file() {
    SpecFile spec;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind == Tok::Ident && (t.text == "initially" || t.text == "always")) {
        section(spec);
      } else {
        definition(spec);
      }
    }
    return spec;
  }

  ExprPtr single_expression() {
    ExprPtr e = expr();
    if (peek().kind == Tok::Semi) next();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      const Token& t = peek();
      fail("expected " + std::string(what) + ", found " + describe(t), t.line, t.column);
    }
    return next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  std::string identifier(std::string_view what) {
    const Token& t = expect(Tok::Ident, what);
    if (is_keyword(t.text)) fail("keyword '" + t.text + "' used as " + std::string(what), t.line, t.column);
    return t.text;
  }

  void section(SpecFile& spec) {
    const Token& when = next();
    const Token& kind = peek();
    Section s{};
    if (kind.kind == Tok::Ident && kind.text == "assume") {
      s = when.text == "initially" ? Section::InitiallyAssume : Section::AlwaysAssume;
    } else if (kind.kind == Tok::Ident && kind.text == "guarantee") {
      s = when.text == "initially" ? Section::InitiallyGuarantee : Section::AlwaysGuarantee;
    } else {
      fail("expected 'assume' or 'guarantee' after '" + when.text + "'", kind.line, kind.column);
    }
    next();
    expect(Tok::LBrace, "'{'");
    auto& stmts = spec.sections[s];
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) fail("unterminated block, expected '}'", peek().line, peek().column);
      stmts.push_back(expr());
      expect(Tok::Semi, "';'");
    }
    next();
  }

  void definition(SpecFile& spec) {
    Definition d;
    d.line = peek().line;
    d.column = peek().column;
    d.name = identifier("definition name");
    while (peek().kind == Tok::Ident) {
      const Token& p = peek();
      std::string param = identifier("parameter name");
      if (param == d.name || std::find(d.params.begin(), d.params.end(), param) != d.params.end()) {
        fail("duplicate parameter '" + param + "'", p.line, p.column);
      }
      d.params.push_back(std::move(param));
    }
    expect(Tok::Equals, "'='");
    d.body = expr();
    expect(Tok::Semi, "';'");
    if (spec.find(d.name)) fail("duplicate definition '" + d.name + "'", d.line, d.column);
    spec.definitions.push_back(std::move(d));
  }

  // Precedence, weakest first:
  //   -> <-> ^   (right)
  //   U W R      (right)
  //   ||         (left)
  //   &&         (left)
  //   ! X F G    (prefix)
  //   application by juxtaposition
  ExprPtr expr() { return implication(); }

  ExprPtr binary(Op op, ExprPtr l, ExprPtr r, const Token& at) {
    Expr e;
    e.kind = Expr::Kind::Binary;
    e.op = op;
    e.args = {std::move(l), std::move(r)};
    e.line = at.line;
    e.column = at.column;
    return make(std::move(e));
  }

  ExprPtr implication() {
    ExprPtr lhs = temporal();
    Op op;
    switch (peek().kind) {
      case Tok::Arrow: op = Op::Implies; break;
      case Tok::Iff: op = Op::Iff; break;
      case Tok::Caret: op = Op::Xor; break;
      default: return lhs;
    }
    const Token at = next();
    return binary(op, lhs, implication(), at);
  }

  ExprPtr temporal() {
    ExprPtr lhs = disjunction();
    Op op;
    if (at_keyword("U")) {
      op = Op::Until;
    } else if (at_keyword("W")) {
      op = Op::WeakUntil;
    } else if (at_keyword("R")) {
      op = Op::Release;
    } else {
      return lhs;
    }
    const Token at = next();
    return binary(op, lhs, temporal(), at);
  }

  ExprPtr disjunction() {
    ExprPtr lhs = conjunction();
    while (peek().kind == Tok::OrOr) {
      const Token at = next();
      lhs = binary(Op::Or, lhs, conjunction(), at);
    }
    return lhs;
  }

  ExprPtr conjunction() {
    ExprPtr lhs = prefix();
    while (peek().kind == Tok::AndAnd) {
      const Token at = next();
      lhs = binary(Op::And, lhs, prefix(), at);
    }
    return lhs;
  }

  ExprPtr prefix() {
    Op op;
    if (peek().kind == Tok::Bang) {
      op = Op::Not;
    } else if (at_keyword("X")) {
      op = Op::Next;
    } else if (at_keyword("F")) {
      op = Op::Finally;
    } else if (at_keyword("G")) {
      op = Op::Globally;
    } else {
      return application();
    }
    const Token at = next();
    Expr e;
    e.kind = Expr::Kind::Unary;
    e.op = op;
    e.args = {prefix()};
    e.line = at.line;
    e.column = at.column;
    return make(std::move(e));
  }

  bool at_atom_start() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen:
      case Tok::LBracket:
        return true;
      case Tok::Ident:
        return t.text == "true" || t.text == "false" || !is_keyword(t.text);
      default:
        return false;
    }
  }

  bool at_bare_name() const {
    const Token& t = peek();
    return t.kind == Tok::Ident && !is_keyword(t.text) &&
           !(peek(1).kind == Tok::LParen && peek(2).kind == Tok::RParen);
  }

  ExprPtr application() {
    if (!at_atom_start()) {
      const Token& t = peek();
      fail("expected an expression, found " + describe(t), t.line, t.column);
    }
    if (!at_bare_name()) return atom();
    const Token head = next();
    if (!at_atom_start()) {
      Expr e;
      e.kind = Expr::Kind::Name;
      e.name = head.text;
      e.line = head.line;
      e.column = head.column;
      return make(std::move(e));
    }
    Expr e;
    e.kind = Expr::Kind::Apply;
    e.name = head.text;
    e.line = head.line;
    e.column = head.column;
    while (at_atom_start()) e.args.push_back(atom());
    return make(std::move(e));
  }

  ExprPtr atom() {
    const Token t = next();
    Expr e;
    e.line = t.line;
    e.column = t.column;
    switch (t.kind) {
      case Tok::LParen: {
        ExprPtr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LBracket: {
        e.kind = Expr::Kind::Update;
        e.name = identifier("update target");
        expect(Tok::LeftArrow, "'<-'");
        e.args = {expr()};
        expect(Tok::RBracket, "']'");
        return make(std::move(e));
      }
      case Tok::Ident:
        if (t.text == "true" || t.text == "false") {
          e.kind = Expr::Kind::Bool;
          e.value = t.text == "true";
          return make(std::move(e));
        }
        e.name = t.text;
        if (peek().kind == Tok::LParen && peek(1).kind == Tok::RParen) {
          next();
          next();
          e.kind = Expr::Kind::Constant;
        } else {
          e.kind = Expr::Kind::Name;
        }
        return make(std::move(e));
      default:
        fail("expected an expression, found " + describe(t), t.line, t.column);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Names referenced by `e` that are not bound by `params`.
void free_names(const Expr& e, const std::vector<std::string>& params, std::set<std::string>& out) {
  auto bound = [&](const std::string& n) {
    return std::find(params.begin(), params.end(), n) != params.end();
  };
  if ((e.kind == Expr::Kind::Name || e.kind == Expr::Kind::Apply) && !bound(e.name)) {
    out.insert(e.name);
  }
  for (const auto& a : e.args) free_names(*a, params, out);
}

void check_acyclic(const SpecFile& spec) {
  std::map<std::string, std::set<std::string>> refs;
  for (const auto& d : spec.definitions) {
    std::set<std::string> names;
    free_names(*d.body, d.params, names);
    for (const auto& n : names) {
      if (spec.find(n)) refs[d.name].insert(n);
    }
  }
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark> mark;
  std::function<void(const Definition&)> visit = [&](const Definition& d) {
    mark[d.name] = Mark::Active;
    for (const auto& n : refs[d.name]) {
      if (mark[n] == Mark::Active) {
        fail("definition '" + d.name + "' is recursive through '" + n + "'", d.line, d.column,
             ErrorKind::RecursiveMacro);
      }
      if (mark[n] == Mark::None) visit(*spec.find(n));
    }
    mark[d.name] = Mark::Done;
  };
  for (const auto& d : spec.definitions) {
    if (mark[d.name] == Mark::None) visit(d);
  }
}

// --- expansion ---------------------------------------------------------------

using Bindings = std::map<std::string, ExprPtr>;

ExprPtr expand_expr(const SpecFile& spec, const ExprPtr& e, const Bindings& env, int depth);

ExprPtr call(const SpecFile& spec, const Definition& d, std::vector<ExprPtr> args, const Expr& at,
             int depth) {
  if (args.size() != d.params.size()) {
    fail("macro '" + d.name + "' expects " + std::to_string(d.params.size()) +
             " argument(s), got " + std::to_string(args.size()),
         at.line, at.column, ErrorKind::WrongMacroArity);
  }
  // acyclicity is checked at parse time; this only guards hand-built SpecFiles
  if (depth > 1000) fail("macro expansion too deep", at.line, at.column, ErrorKind::RecursiveMacro);
  Bindings inner;
  for (std::size_t i = 0; i < args.size(); ++i) inner[d.params[i]] = std::move(args[i]);
  return expand_expr(spec, d.body, inner, depth + 1);
}

ExprPtr expand_expr(const SpecFile& spec, const ExprPtr& e, const Bindings& env, int depth) {
  switch (e->kind) {
    case Expr::Kind::Name: {
      if (auto it = env.find(e->name); it != env.end()) return it->second;
      if (const Definition* d = spec.find(e->name)) return call(spec, *d, {}, *e, depth);
      return e;
    }
    case Expr::Kind::Apply: {
      std::vector<ExprPtr> args;
      for (const auto& a : e->args) args.push_back(expand_expr(spec, a, env, depth));
      if (auto it = env.find(e->name); it != env.end()) {
        const Expr& bound = *it->second;
        if (bound.kind != Expr::Kind::Name) {
          fail("parameter '" + e->name + "' is applied to arguments but is bound to '" +
                   pretty(bound) + "', which is not a name",
               e->line, e->column, ErrorKind::UndefinedName);
        }
        if (const Definition* d = spec.find(bound.name)) return call(spec, *d, std::move(args), *e, depth);
        Expr out = *e;
        out.name = bound.name;
        out.args = std::move(args);
        return make(std::move(out));
      }
      if (const Definition* d = spec.find(e->name)) return call(spec, *d, std::move(args), *e, depth);
      Expr out = *e;
      out.args = std::move(args);
      return make(std::move(out));
    }
    case Expr::Kind::Update: {
      Expr out = *e;
      if (auto it = env.find(e->name); it != env.end()) {
        if (it->second->kind != Expr::Kind::Name) {
          fail("update target '" + e->name + "' is bound to '" + pretty(*it->second) +
                   "', which is not a signal name",
               e->line, e->column);
        }
        out.name = it->second->name;
      }
      out.args = {expand_expr(spec, e->args[0], env, depth)};
      return make(std::move(out));
    }
    case Expr::Kind::Unary:
    case Expr::Kind::Binary: {
      Expr out = *e;
      for (auto& a : out.args) a = expand_expr(spec, a, env, depth);
      return make(std::move(out));
    }
    case Expr::Kind::Constant:
    case Expr::Kind::Bool:
      return e;
  }
  return e;
}

Formula fold_and(const std::vector<Formula>& fs) {
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::conj(acc, fs[i]);
  return acc;
}

// Expr pretty-printing mirrors the Formula printer.
int expr_level(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Unary: return 5;
    case Expr::Kind::Binary:
      switch (e.op) {
        case Op::Implies:
        case Op::Iff:
        case Op::Xor: return 1;
        case Op::Until:
        case Op::WeakUntil:
        case Op::Release: return 2;
        case Op::Or: return 3;
        default: return 4;
      }
    case Expr::Kind::Apply: return 6;
    default: return 7;
  }
}

void print_expr(const Expr& e, int min_level, std::string& out) {
  const int lv = expr_level(e);
  const bool wrap = lv < min_level;
  if (wrap) out += '(';
  switch (e.kind) {
    case Expr::Kind::Name: out += e.name; break;
    case Expr::Kind::Constant: out += e.name + "()"; break;
    case Expr::Kind::Bool: out += e.value ? "true" : "false"; break;
    case Expr::Kind::Update:
      out += "[ " + e.name + " <- ";
      print_expr(*e.args[0], 0, out);
      out += " ]";
      break;
    case Expr::Kind::Apply:
      out += e.name;
      for (const auto& a : e.args) {
        out += ' ';
        print_expr(*a, 7, out);
      }
      break;
    case Expr::Kind::Unary:
      out += e.op == Op::Not ? "!" : e.op == Op::Next ? "X " : e.op == Op::Finally ? "F " : "G ";
      print_expr(*e.args[0], 5, out);
      break;
    case Expr::Kind::Binary: {
      const bool la = e.op == Op::And || e.op == Op::Or;
      static const std::map<Op, const char*> kSym = {
          {Op::And, " && "}, {Op::Or, " || "},    {Op::Implies, " -> "}, {Op::Iff, " <-> "},
          {Op::Xor, " ^ "},  {Op::Until, " U "}, {Op::WeakUntil, " W "}, {Op::Release, " R "}};
      print_expr(*e.args[0], la ? lv : lv + 1, out);
      out += kSym.at(e.op);
      print_expr(*e.args[1], la ? lv + 1 : lv, out);
      break;
    }
  }
  if (wrap) out += ')';
}

}  // namespace

std::string pretty(const Expr& e) {
  std::string out;
  print_expr(e, 0, out);
  return out;
}

std::string_view to_string(Section s) noexcept {
  switch (s) {
    case Section::InitiallyAssume: return "initially assume";
    case Section::AlwaysAssume: return "always assume";
    case Section::InitiallyGuarantee: return "initially guarantee";
    case Section::AlwaysGuarantee: return "always guarantee";
  }
  return "";
}

const Definition* SpecFile::find(const std::string& name) const {
  for (const auto& d : definitions) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::size_t SpecFile::statement_count(Section s) const {
  auto it = sections.find(s);
  return it == sections.end() ? 0 : it->second.size();
}

SpecFile parse_spec(std::string_view text) {
  Parser p(text);
  SpecFile spec = p.spec_file();
  check_acyclic(spec);
  return spec;
}

ExprPtr expand_macros(const SpecFile& spec, const ExprPtr& e) { return expand_expr(spec, e, {}, 0); }

FunctionTerm to_term(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Name:
      return FunctionTerm::signal(e.name);
    case Expr::Kind::Constant:
      return FunctionTerm::apply(e.name);
    case Expr::Kind::Apply: {
      std::vector<FunctionTerm> args;
      for (const auto& a : e.args) args.push_back(to_term(*a));
      return FunctionTerm::apply(e.name, std::move(args));
    }
    default:
      fail("expected a function term, found '" + pretty(e) + "'", e.line, e.column);
  }
}

Formula to_formula(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Name:
    case Expr::Kind::Constant:
    case Expr::Kind::Apply:
      return Formula::predicate(PredicateTerm{to_term(e)});
    case Expr::Kind::Update:
      return Formula::update(Update{e.name, to_term(*e.args[0])});
    case Expr::Kind::Bool:
      return Formula::constant(e.value);
    case Expr::Kind::Unary:
      return Formula::unary(e.op, to_formula(*e.args[0]));
    case Expr::Kind::Binary:
      return Formula::binary(e.op, to_formula(*e.args[0]), to_formula(*e.args[1]));
  }
  fail("malformed expression", e.line, e.column);
}

Formula expand(const SpecFile& spec) {
  auto part = [&](Section s) -> std::vector<Formula> {
    std::vector<Formula> out;
    auto it = spec.sections.find(s);
    if (it == spec.sections.end()) return out;
    for (const auto& stmt : it->second) out.push_back(to_formula(*expand_macros(spec, stmt)));
    return out;
  };
  auto side = [&](Section init, Section always) -> std::vector<Formula> {
    std::vector<Formula> out;
    if (auto i = part(init); !i.empty()) out.push_back(fold_and(i));
    if (auto a = part(always); !a.empty()) out.push_back(Formula::globally(fold_and(a)));
    return out;
  };

  auto assumptions = side(Section::InitiallyAssume, Section::AlwaysAssume);
  auto guarantees = side(Section::InitiallyGuarantee, Section::AlwaysGuarantee);
  Formula g = guarantees.empty() ? Formula::constant(true) : fold_and(guarantees);
  Formula result = assumptions.empty() ? g : Formula::binary(Op::Implies, fold_and(assumptions), g);
  classify_signals(result);  // surfaces ArityConflict / RoleConflict
  return result;
}

Formula parse_formula(std::string_view text) {
  Parser p(text);
  return to_formula(*p.single_expression());
}

FunctionTerm parse_term(std::string_view text) {
  Parser p(text);
  return to_term(*p.single_expression());
}

}  // namespace tslkit

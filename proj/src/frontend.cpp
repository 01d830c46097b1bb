#include "setrel/frontend.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace setrel {

namespace {

constexpr std::size_t kMaxDepth = 2000;

struct SExpr {
  enum class Type { Symbol, Numeral, Keyword, String, List } type = Type::List;
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
  std::vector<SExpr> items;

  bool is_symbol(std::string_view s) const { return type == Type::Symbol && text == s; }
  bool is_list() const { return type == Type::List; }
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) return out;
      out.push_back(read(0));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  char peek() const { return src_[pos_]; }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ';') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  static bool delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == '"' || c == '|';
  }

  SExpr read(std::size_t depth) {
    if (depth > kMaxDepth) fail("nesting too deep");
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    e.col = col_;
    char c = peek();
    if (c == '(') {
      advance();
      e.type = SExpr::Type::List;
      for (;;) {
        skip_space();
        if (pos_ >= src_.size()) throw ParseError(e.line, e.col, "unterminated list");
        if (peek() == ')') {
          advance();
          return e;
        }
        e.items.push_back(read(depth + 1));
      }
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '|') {
      advance();
      e.type = SExpr::Type::Symbol;
      while (pos_ < src_.size() && peek() != '|') {
        if (peek() == '\\') fail("backslash in quoted symbol");
        e.text += peek();
        advance();
      }
      if (pos_ >= src_.size()) throw ParseError(e.line, e.col, "unterminated quoted symbol");
      advance();
      return e;
    }
    if (c == '"') {
      advance();
      e.type = SExpr::Type::String;
      for (;;) {
        if (pos_ >= src_.size()) throw ParseError(e.line, e.col, "unterminated string");
        if (peek() == '"') {
          advance();
          if (pos_ < src_.size() && peek() == '"') {
            e.text += '"';
            advance();
            continue;
          }
          return e;
        }
        e.text += peek();
        advance();
      }
    }
    while (pos_ < src_.size() && !delimiter(peek())) {
      e.text += peek();
      advance();
    }
    if (e.text.empty()) fail("unexpected character");
    if (std::isdigit(static_cast<unsigned char>(e.text[0]))) {
      e.type = SExpr::Type::Numeral;
      if (!std::all_of(e.text.begin(), e.text.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); }))
        throw ParseError(e.line, e.col, "unsupported numeral " + e.text);
    } else if (e.text[0] == ':') {
      e.type = SExpr::Type::Keyword;
    } else {
      e.type = SExpr::Type::Symbol;
    }
    return e;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string render(const SExpr& e) {
  switch (e.type) {
    case SExpr::Type::String:
      return "\"" + e.text + "\"";
    case SExpr::Type::Symbol:
      return quote_symbol(e.text);
    case SExpr::Type::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < e.items.size(); ++i) out += (i ? " " : "") + render(e.items[i]);
      return out + ")";
    }
    default:
      return e.text;
  }
}

class Parser {
 public:
  Parser(TermManager& tm, Script& script) : tm_(tm), script_(script) {
    for (Sort s : script.sorts) sorts_.emplace(s.name(), s);
    for (Term c : script.constants) constants_.emplace(c.name(), c);
    for (const std::string& f : script.functions) functions_.insert(f);
  }

  void command(const SExpr& e) {
    if (!e.is_list() || e.items.empty() || e.items[0].type != SExpr::Type::Symbol)
      fail(e, "expected a command");
    const std::string& head = e.items[0].text;
    if (head == "set-logic") {
      arity(e, 2);
      script_.logic = e.items[1].text;
    } else if (head == "set-option") {
      arity(e, 3);
      if (e.items[1].type != SExpr::Type::Keyword) fail(e.items[1], "expected an option keyword");
      script_.options[e.items[1].text] = render(e.items[2]);
    } else if (head == "set-info" || head == "exit" || head == "get-info") {
    } else if (head == "declare-sort") {
      if (e.items.size() != 2 && e.items.size() != 3) fail(e, "declare-sort expects a name and arity");
      const SExpr& n = symbol_at(e, 1);
      if (e.items.size() == 3 && !(e.items[2].type == SExpr::Type::Numeral && e.items[2].text == "0"))
        fail(e.items[2], "only sorts of arity 0 are supported");
      if (sorts_.count(n.text) || reserved_sort(n.text)) fail(n, "sort " + n.text + " already declared");
      Sort s = tm_.uninterpreted_sort(n.text);
      sorts_.emplace(n.text, s);
      script_.sorts.push_back(s);
    } else if (head == "declare-const") {
      arity(e, 3);
      declare_constant(symbol_at(e, 1), sort(e.items[2]));
    } else if (head == "declare-fun") {
      arity(e, 4);
      const SExpr& n = symbol_at(e, 1);
      if (!e.items[2].is_list()) fail(e.items[2], "expected a list of argument sorts");
      std::vector<Sort> dom;
      for (const SExpr& d : e.items[2].items) dom.push_back(sort(d));
      Sort range = sort(e.items[3]);
      if (dom.empty()) {
        declare_constant(n, range);
      } else {
        check_fresh(n);
        try {
          tm_.declare_function(n.text, dom, range);
        } catch (const SortError& err) {
          throw LocatedSortError(err, n.line, n.col);
        }
        functions_.insert(n.text);
        script_.functions.push_back(n.text);
      }
    } else if (head == "assert") {
      arity(e, 2);
      Term t = term(e.items[1], 0);
      if (!t.sort().is_bool()) throw LocatedSortError(SortError("Bool", t.sort().to_string(), 0), e.line, e.col);
      script_.assertions.push_back(t);
    } else if (head == "check-sat") {
      script_.check_sat = true;
    } else if (head == "get-model") {
      script_.get_model = true;
    } else {
      fail(e.items[0], "unsupported command " + head);
    }
  }

  Term term(const SExpr& e, std::size_t depth) {
    if (depth > kMaxDepth) fail(e, "nesting too deep");
    switch (e.type) {
      case SExpr::Type::Numeral: {
        std::int64_t k = 0;
        auto r = std::from_chars(e.text.data(), e.text.data() + e.text.size(), k);
        if (r.ec != std::errc() || r.ptr != e.text.data() + e.text.size()) fail(e, "numeral out of range");
        return tm_.int_const(k);
      }
      case SExpr::Type::Symbol:
        return symbol_term(e);
      case SExpr::Type::List:
        break;
      default:
        fail(e, "unexpected token " + e.text);
    }
    if (e.items.empty()) fail(e, "empty application");
    const SExpr& h = e.items[0];
    if (h.is_list()) {
      if (h.items.size() == 3 && h.items[0].is_symbol("_")) fail(h, "indexed identifiers are not supported");
      fail(h, "expected an operator");
    }
    if (h.type != SExpr::Type::Symbol) fail(h, "expected an operator");
    const std::string& op = h.text;
    try {
      return application(e, op, depth);
    } catch (const LocatedSortError&) {
      throw;
    } catch (const SortError& err) {
      throw LocatedSortError(err, e.line, e.col);
    } catch (const ArityError& err) {
      throw ParseError(e.line, e.col, err.what());
    }
  }

 private:
  [[noreturn]] static void fail(const SExpr& e, const std::string& msg) { throw ParseError(e.line, e.col, msg); }

  static void arity(const SExpr& e, std::size_t n) {
    if (e.items.size() != n)
      fail(e, render(e.items[0]) + " expects " + std::to_string(n - 1) + " arguments");
  }

  static const SExpr& symbol_at(const SExpr& e, std::size_t i) {
    if (e.items[i].type != SExpr::Type::Symbol) fail(e.items[i], "expected a symbol");
    return e.items[i];
  }

  static bool reserved_sort(std::string_view n) {
    return n == "Int" || n == "Bool" || n == "Set" || n == "Tuple" || n == "UnitTuple";
  }

  void check_fresh(const SExpr& n) {
    if (constants_.count(n.text) || functions_.count(n.text)) fail(n, "symbol " + n.text + " already declared");
  }

  void declare_constant(const SExpr& n, Sort s) {
    check_fresh(n);
    if (s.is_function()) fail(n, "constants cannot have function sort");
    Term v = tm_.var(n.text, s);
    constants_.emplace(n.text, v);
    script_.constants.push_back(v);
  }

  Sort sort(const SExpr& e) {
    if (e.type == SExpr::Type::Symbol) {
      if (e.text == "Int") return tm_.int_sort();
      if (e.text == "Bool") return tm_.bool_sort();
      if (e.text == "UnitTuple") return tm_.tuple_sort({});
      auto it = sorts_.find(e.text);
      if (it == sorts_.end()) throw UndeclaredSymbol(e.line, e.col, e.text);
      return it->second;
    }
    if (!e.is_list() || e.items.empty() || e.items[0].type != SExpr::Type::Symbol) fail(e, "expected a sort");
    const std::string& h = e.items[0].text;
    try {
      if (h == "Set") {
        arity(e, 2);
        return tm_.set_sort(sort(e.items[1]));
      }
      if (h == "Tuple") {
        std::vector<Sort> comps;
        for (std::size_t i = 1; i < e.items.size(); ++i) comps.push_back(sort(e.items[i]));
        return tm_.tuple_sort(std::move(comps));
      }
      if (h == "Relation") {
        std::vector<Sort> comps;
        for (std::size_t i = 1; i < e.items.size(); ++i) comps.push_back(sort(e.items[i]));
        return tm_.set_sort(tm_.tuple_sort(std::move(comps)));
      }
    } catch (const LocatedSortError&) {
      throw;
    } catch (const SortError& err) {
      throw LocatedSortError(err, e.line, e.col);
    }
    fail(e, "unknown sort constructor " + h);
  }

  Term lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    auto c = constants_.find(name);
    return c == constants_.end() ? Term{} : c->second;
  }

  Term symbol_term(const SExpr& e) {
    if (Term t = lookup(e.text)) return t;
    if (e.text == "true") return tm_.true_term();
    if (e.text == "false") return tm_.false_term();
    if (e.text == "tuple.unit") return tm_.tuple({});
    if (functions_.count(e.text)) fail(e, "function " + e.text + " used without arguments");
    throw UndeclaredSymbol(e.line, e.col, e.text);
  }

  /// A predicate or map argument: a lambda, or a declared function symbol
  /// (eta-expanded).
  Term function_argument(const SExpr& e, Sort element, std::size_t depth) {
    if (e.type == SExpr::Type::Symbol && functions_.count(e.text) && !lookup(e.text)) {
      const FunctionSymbol* f = tm_.function(e.text);
      std::vector<Term> binders;
      if (f->domain.size() == 1 && f->domain[0] == element) {
        binders.push_back(tm_.bound_var("_x", element));
      } else if (element && element.is_tuple() && element.arity() == f->domain.size()) {
        for (std::size_t i = 0; i < f->domain.size(); ++i)
          binders.push_back(tm_.bound_var("_x" + std::to_string(i), f->domain[i]));
      } else {
        throw LocatedSortError(SortError("function over " + (element ? element.to_string() : "?"), e.text, 0),
                               e.line, e.col);
      }
      return tm_.lambda(binders, tm_.apply(e.text, binders));
    }
    return term(e, depth + 1);
  }

  std::vector<Term> args(const SExpr& e, std::size_t depth, std::size_t from = 1) {
    std::vector<Term> out;
    for (std::size_t i = from; i < e.items.size(); ++i) out.push_back(term(e.items[i], depth + 1));
    return out;
  }

  static void need_at_least(const SExpr& e, std::size_t n) {
    if (e.items.size() < n + 1)
      fail(e, e.items[0].text + " expects at least " + std::to_string(n) + " arguments");
  }

  Term fold_left(Kind k, const std::vector<Term>& a) {
    Term acc = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) acc = tm_.mk(k, {acc, a[i]});
    return acc;
  }

  Term lambda(const SExpr& e, std::size_t depth) {
    arity(e, 3);
    const SExpr& bl = e.items[1];
    if (!bl.is_list() || bl.items.empty()) fail(bl, "expected a non-empty binder list");
    std::map<std::string, Term> scope;
    std::vector<Term> binders;
    for (const SExpr& b : bl.items) {
      if (!b.is_list() || b.items.size() != 2 || b.items[0].type != SExpr::Type::Symbol)
        fail(b, "expected a binder (name Sort)");
      Sort s = sort(b.items[1]);
      if (!s.is_element()) throw LocatedSortError(SortError("element sort", s.to_string(), 0), b.line, b.col);
      Term v = tm_.bound_var(b.items[0].text, s);
      if (!scope.emplace(b.items[0].text, v).second) fail(b, "duplicate binder " + b.items[0].text);
      binders.push_back(v);
    }
    scopes_.push_back(std::move(scope));
    Term body = term(e.items[2], depth + 1);
    scopes_.pop_back();
    return tm_.lambda(std::move(binders), body);
  }

  Term let(const SExpr& e, std::size_t depth) {
    arity(e, 3);
    const SExpr& bl = e.items[1];
    if (!bl.is_list() || bl.items.empty()) fail(bl, "expected let bindings");
    std::map<std::string, Term> scope;
    for (const SExpr& b : bl.items) {
      if (!b.is_list() || b.items.size() != 2 || b.items[0].type != SExpr::Type::Symbol)
        fail(b, "expected a binding (name term)");
      Term v = term(b.items[1], depth + 1);
      if (!scope.emplace(b.items[0].text, v).second) fail(b, "duplicate binding " + b.items[0].text);
    }
    scopes_.push_back(std::move(scope));
    Term body = term(e.items[2], depth + 1);
    scopes_.pop_back();
    return body;
  }

  Term set_operand_function(const SExpr& e, Kind k, std::size_t depth) {
    arity(e, 3);
    Term s = term(e.items[2], depth + 1);
    if (!s.sort().is_set()) throw LocatedSortError(SortError("Set sort", s.sort().to_string(), 1), e.line, e.col);
    Term f = function_argument(e.items[1], s.sort().element(), depth);
    return tm_.mk(k, {f, s});
  }

  Term application(const SExpr& e, const std::string& op, std::size_t depth) {
    if (op == "as") {
      arity(e, 3);
      if (!e.items[1].is_symbol("set.empty")) fail(e.items[1], "only (as set.empty S) is supported");
      return tm_.empty_set(sort(e.items[2]));
    }
    if (op == "lambda") return lambda(e, depth);
    if (op == "let") return let(e, depth);
    if (op == "set.filter") return set_operand_function(e, Kind::Filter, depth);
    if (op == "set.map") return set_operand_function(e, Kind::Map, depth);
    if (op == "set.all") return set_operand_function(e, Kind::SetAll, depth);
    if (op == "set.some") return set_operand_function(e, Kind::SetSome, depth);

    if (Term f = lookup(op)) fail(e.items[0], op + " is not a function");
    if (functions_.count(op)) return tm_.apply(op, args(e, depth));

    static const std::map<std::string, Kind, std::less<>> binary = {
        {"set.minus", Kind::Diff},      {"set.member", Kind::Member}, {"set.subset", Kind::Subset},
        {">", Kind::Gt},                {">=", Kind::Ge},             {"set.singleton", Kind::Singleton},
        {"not", Kind::Not},             {"ite", Kind::Ite}};
    if (auto it = binary.find(op); it != binary.end()) {
      std::size_t n = it->second == Kind::Ite ? 3 : (it->second == Kind::Singleton || it->second == Kind::Not) ? 1 : 2;
      arity(e, n + 1);
      return tm_.mk(it->second, args(e, depth));
    }
    if (op == "<" || op == "<=") {
      arity(e, 3);
      auto a = args(e, depth);
      return tm_.mk(op == "<" ? Kind::Gt : Kind::Ge, {a[1], a[0]});
    }
    if (op == "set.union" || op == "set.inter" || op == "rel.product") {
      need_at_least(e, 2);
      Kind k = op == "set.union" ? Kind::Union : op == "set.inter" ? Kind::Inter : Kind::Product;
      return fold_left(k, args(e, depth));
    }
    if (op == "tuple") {
      need_at_least(e, 1);
      return tm_.tuple(args(e, depth));
    }
    if (op == "and" || op == "or") {
      auto a = args(e, depth);
      return op == "and" ? tm_.mk_and(std::move(a)) : tm_.mk_or(std::move(a));
    }
    if (op == "=>") {
      need_at_least(e, 2);
      auto a = args(e, depth);
      Term acc = a.back();
      for (std::size_t i = a.size() - 1; i-- > 0;) acc = tm_.implies(a[i], acc);
      return acc;
    }
    if (op == "=") {
      need_at_least(e, 2);
      auto a = args(e, depth);
      std::vector<Term> parts;
      for (std::size_t i = 0; i + 1 < a.size(); ++i) parts.push_back(tm_.eq(a[i], a[i + 1]));
      return tm_.mk_and(std::move(parts));
    }
    if (op == "distinct") {
      need_at_least(e, 2);
      auto a = args(e, depth);
      std::vector<Term> parts;
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) parts.push_back(tm_.mk_not(tm_.eq(a[i], a[j])));
      return tm_.mk_and(std::move(parts));
    }
    if (op == "+") {
      need_at_least(e, 2);
      return tm_.mk(Kind::Add, args(e, depth));
    }
    if (op == "-") {
      need_at_least(e, 1);
      auto a = args(e, depth);
      if (a.size() == 1) return tm_.neg(a[0]);
      std::vector<Term> parts{a[0]};
      for (std::size_t i = 1; i < a.size(); ++i) parts.push_back(tm_.neg(a[i]));
      return tm_.mk(Kind::Add, std::move(parts));
    }
    if (op == "*") {
      arity(e, 3);
      auto a = args(e, depth);
      if (a[0].is(Kind::IntConst)) return tm_.mk_mul(a[0].value(), a[1]);
      if (a[1].is(Kind::IntConst)) return tm_.mk_mul(a[1].value(), a[0]);
      fail(e, "nonlinear multiplication is not supported");
    }
    throw UndeclaredSymbol(e.items[0].line, e.items[0].col, op);
  }

  TermManager& tm_;
  Script& script_;
  std::map<std::string, Sort, std::less<>> sorts_;
  std::map<std::string, Term, std::less<>> constants_;
  std::set<std::string, std::less<>> functions_;
  std::vector<std::map<std::string, Term>> scopes_;
};

}  // namespace

Script parse(TermManager& tm, std::string_view text) {
  Script script;
  std::vector<SExpr> cmds = Lexer(text).read_all();
  Parser p(tm, script);
  for (const SExpr& c : cmds) p.command(c);
  return script;
}

Term parse_term(TermManager& tm, const Script& scope, std::string_view text) {
  Script copy = scope;
  std::vector<SExpr> items = Lexer(text).read_all();
  if (items.size() != 1) throw ParseError(1, 1, "expected exactly one term");
  Parser p(tm, copy);
  return p.term(items[0], 0);
}

std::string print_sort(Sort s) { return s.to_string(); }

std::string print_term(Term t) { return t.to_string(); }

std::string print_script(TermManager& tm, const Script& s) {
  std::ostringstream os;
  if (!s.logic.empty()) os << "(set-logic " << s.logic << ")\n";
  for (auto& [k, v] : s.options) os << "(set-option " << k << " " << v << ")\n";
  for (Sort u : s.sorts) os << "(declare-sort " << quote_symbol(u.name()) << " 0)\n";
  for (const std::string& f : s.functions) {
    const FunctionSymbol* fs = tm.function(f);
    os << "(declare-fun " << quote_symbol(f) << " (";
    for (std::size_t i = 0; i < fs->domain.size(); ++i) os << (i ? " " : "") << fs->domain[i].to_string();
    os << ") " << fs->range.to_string() << ")\n";
  }
  for (Term c : s.constants) os << "(declare-const " << quote_symbol(c.name()) << " " << c.sort().to_string() << ")\n";
  for (Term a : s.assertions) os << "(assert " << a.to_string() << ")\n";
  if (s.check_sat) os << "(check-sat)\n";
  if (s.get_model) os << "(get-model)\n";
  return os.str();
}

std::string print_model(const Model& m, const std::vector<Term>& vars) {
  std::ostringstream os;
  os << "(\n";
  for (Term v : vars) {
    os << "  (define-fun " << quote_symbol(v.name()) << " () " << v.sort().to_string() << " ";
    if (m.has(v))
      os << m.get(v).to_string(v.sort());
    else
      os << default_value(v.sort()).to_string(v.sort());
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

bool same_script(const Script& a, const Script& b) {
  return a.logic == b.logic && a.sorts == b.sorts && a.constants == b.constants && a.functions == b.functions &&
         a.assertions == b.assertions && a.options == b.options && a.check_sat == b.check_sat &&
         a.get_model == b.get_model;
}

}  // namespace setrel

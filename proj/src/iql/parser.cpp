/*
 * Copyright (c) intentcube authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "intentcube/iql/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>

namespace intentcube::iql {

namespace {

constexpr std::array kKeywords = {"with",   "describe", "assess", "explain", "predict", "suggest", "for",
                                  "by",     "size",     "using",  "against", "next",    "points",  "of",
                                  "over",   "cube",     "where",  "group",   "agg",     "and",     "or",
                                  "not",    "true",     "false",  "as"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

enum class Tok { Ident, Keyword, String, Int, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // keywords lower-cased; identifiers and strings unescaped
  std::string raw;
  std::size_t offset = 0;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return t.raw;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.offset = pos_;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
        t.raw = std::string(src_.substr(start, pos_ - start));
        const auto lw = lower(t.raw);
        if (is_keyword(lw)) {
          t.kind = Tok::Keyword;
          t.text = lw;
        } else {
          t.kind = Tok::Ident;
          t.text = t.raw;
        }
      } else if (c == '"' || c == '\'') {
        t.kind = c == '"' ? Tok::Ident : Tok::String;
        t.text = quoted(c, t);
        t.raw = std::string(src_.substr(t.offset, pos_ - t.offset));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        number(t);
      } else {
        symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
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
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const Token& at, std::vector<std::string> expected, std::string found) {
    ParseError e(at.line, at.column, std::move(expected), std::move(found));
    e.set_offset(at.offset);
    throw e;
  }

  std::string quoted(char q, const Token& t) {
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= src_.size()) fail(t, {std::string(1, q)}, "end of input inside quoted text");
      const char c = src_[pos_];
      if (c == q) {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == q) {
          out += q;
          advance();
          advance();
          continue;
        }
        advance();
        return out;
      }
      out += c;
      advance();
    }
  }

  void number(Token& t) {
    const std::size_t start = pos_;
    bool integral = true;
    if (src_[pos_] == '-') advance();
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      integral = false;
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        integral = false;
        while (pos_ < look) advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      }
    }
    t.raw = std::string(src_.substr(start, pos_ - start));
    t.text = t.raw;
    t.kind = integral && t.raw[0] != '-' ? Tok::Int : Tok::Number;
  }

  void symbol(Token& t) {
    static const std::array<std::string_view, 11> symbols = {"<=", ">=", "<>", "!=", "\xE2\x89\xA4", "\xE2\x89\xA5",
                                                             "\xE2\x89\xA0", "(",  ")",  ",",  "."};
    for (auto s : symbols) {
      if (src_.substr(pos_, s.size()) == s) {
        for (std::size_t i = 0; i < s.size(); ++i) advance();
        t.kind = Tok::Symbol;
        t.raw = std::string(s);
        t.text = t.raw;
        return;
      }
    }
    const char c = src_[pos_];
    if (c == '=' || c == '<' || c == '>') {
      advance();
      t.kind = Tok::Symbol;
      t.raw = std::string(1, c);
      t.text = t.raw;
      return;
    }
    std::string found;
    if (std::isprint(static_cast<unsigned char>(c))) {
      found = std::string("'") + c + "'";
    } else {
      char buf[8];
      std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned char>(c));
      found = buf;
    }
    fail(t, {"identifier", "string", "number", "operator"}, "unexpected character " + found);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Statement statement() {
    if (peek_keyword("with")) return intention();
    if (peek_keyword("cube")) return query_statement();
    error();
  }

  Intention intention() {
    keyword("with");
    Intention i;
    i.cube = ident("cube name");
    static const std::array<const char*, 5> verbs = {"describe", "assess", "explain", "predict", "suggest"};
    int verb = -1;
    for (int v = 0; v < 5; ++v) {
      if (accept_keyword(verbs[static_cast<std::size_t>(v)])) {
        verb = v;
        break;
      }
    }
    if (verb < 0) error();
    switch (verb) {
      case 0: {
        i.measures = ident_list("measure");
        i.subcube = for_clause();
        DescribeClause d;
        if (accept_keyword("by")) {
          if (accept_keyword("size")) {
            d.size = positive_int();
          } else {
            d.by = level_list();
          }
        }
        i.clause = std::move(d);
        break;
      }
      case 1: {
        i.measures = ident_list("measure");
        i.subcube = for_clause();
        keyword("using");
        AssessClause a;
        do {
          a.benchmarks.push_back(benchmark());
        } while (accept_symbol(","));
        i.clause = std::move(a);
        break;
      }
      case 2: {
        i.measures.push_back(ident("measure"));
        i.subcube = for_clause();
        keyword("using");
        ExplainClause e;
        do {
          e.models.push_back(model_call());
        } while (accept_symbol(","));
        if (accept_keyword("against")) e.against = ident("cube name");
        i.clause = std::move(e);
        break;
      }
      case 3: {
        PredictClause p;
        keyword("next");
        p.k = positive_int();
        keyword("points");
        keyword("of");
        i.measures.push_back(ident("measure"));
        i.subcube = for_clause();
        keyword("over");
        p.over.dimension = ident("dimension");
        if (accept_symbol(".")) p.over.level = ident("level");
        keyword("using");
        p.model = ident("model");
        i.clause = std::move(p);
        break;
      }
      default: {
        SuggestClause s;
        if (accept_keyword("using")) s.recommender = ident("recommender");
        i.clause = std::move(s);
        break;
      }
    }
    i.alias = alias();
    end();
    return i;
  }

  QueryStatement query_statement() {
    QueryStatement s;
    s.query = query();
    s.alias = alias();
    end();
    return s;
  }

  CubeQuery query() {
    keyword("cube");
    CubeQuery q;
    q.source = ident("cube name");
    if (accept_keyword("where")) q.where = condition();
    if (accept_keyword("group")) {
      accept_keyword("by");
      q.group = level_list();
    }
    keyword("agg");
    do {
      q.aggs.push_back(aggregate());
    } while (accept_symbol(","));
    return q;
  }

  Condition full_condition() {
    auto c = condition();
    end();
    return c;
  }

  void end() {
    if (peek().kind != Tok::End) {
      expected_.insert("end of input");
      error();
    }
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  void next() {
    if (tokens_[pos_].kind != Tok::End) ++pos_;
    expected_.clear();
  }

  [[noreturn]] void error() {
    const Token& t = peek();
    ParseError e(t.line, t.column, {expected_.begin(), expected_.end()}, describe(t));
    e.set_offset(t.offset);
    throw e;
  }

  [[noreturn]] void error(std::vector<std::string> expected, std::string found) {
    const Token& t = peek();
    ParseError e(t.line, t.column, std::move(expected), std::move(found));
    e.set_offset(t.offset);
    throw e;
  }

  bool peek_keyword(const char* kw) {
    expected_.insert(std::string("'") + kw + "'");
    return peek().kind == Tok::Keyword && peek().text == kw;
  }

  bool accept_keyword(const char* kw) {
    if (!peek_keyword(kw)) return false;
    next();
    return true;
  }

  void keyword(const char* kw) {
    if (!accept_keyword(kw)) error();
  }

  bool accept_symbol(const char* s) {
    expected_.insert(std::string("'") + s + "'");
    if (peek().kind == Tok::Symbol && peek().text == s) {
      next();
      return true;
    }
    return false;
  }

  void symbol(const char* s) {
    if (!accept_symbol(s)) error();
  }

  std::string ident(const char* what) {
    expected_.insert(what);
    if (peek().kind != Tok::Ident) error();
    std::string out = peek().text;
    next();
    return out;
  }

  std::vector<std::string> ident_list(const char* what) {
    std::vector<std::string> out;
    do {
      out.push_back(ident(what));
    } while (accept_symbol(","));
    return out;
  }

  int positive_int() {
    expected_.insert("positive integer");
    const Token& t = peek();
    if (t.kind != Tok::Int) error();
    long long v = 0;
    for (char c : t.text) {
      v = v * 10 + (c - '0');
      if (v > 1000000000) error({"positive integer"}, t.raw + " (too large)");
    }
    if (v <= 0) error({"positive integer"}, t.raw);
    next();
    return static_cast<int>(v);
  }

  std::optional<Condition> for_clause() {
    if (!accept_keyword("for")) return std::nullopt;
    return condition();
  }

  std::optional<std::string> alias() {
    if (!accept_keyword("as")) return std::nullopt;
    return ident("alias");
  }

  LevelRef level_ref() {
    LevelRef r;
    r.dimension = ident("dimension");
    symbol(".");
    r.level = ident("level");
    return r;
  }

  std::vector<LevelRef> level_list() {
    std::vector<LevelRef> out;
    do {
      out.push_back(level_ref());
    } while (accept_symbol(","));
    return out;
  }

  ParamValue value() {
    expected_.insert("value");
    const Token& t = peek();
    ParamValue v;
    switch (t.kind) {
      case Tok::Int:
      case Tok::Number: v.kind = ParamValue::Kind::Number; break;
      case Tok::String: v.kind = ParamValue::Kind::String; break;
      case Tok::Ident: v.kind = ParamValue::Kind::Ident; break;
      default: error();
    }
    v.text = t.text;
    next();
    return v;
  }

  ParamValue benchmark() {
    expected_.insert("benchmark");
    const Token& t = peek();
    if (t.kind != Tok::Ident && t.kind != Tok::Int && t.kind != Tok::Number) error();
    return value();
  }

  ModelCall model_call() {
    ModelCall m;
    m.type = ident("model type");
    symbol("(");
    if (!accept_symbol(")")) {
      do {
        std::string name = ident("argument");
        if (accept_symbol("=")) {
          m.params.emplace_back(std::move(name), value());
        } else {
          if (!m.params.empty()) error({"'='"}, describe(peek()));
          // Dotted arguments name levels, e.g. work_class.L0.
          while (accept_symbol(".")) name += "." + ident("level");
          m.args.push_back(std::move(name));
        }
      } while (accept_symbol(","));
      symbol(")");
    }
    return m;
  }

  Aggregate aggregate() {
    static const std::array<std::pair<const char*, AggFn>, 5> fns = {
        {{"sum", AggFn::Sum}, {"min", AggFn::Min}, {"max", AggFn::Max}, {"count", AggFn::Count}, {"avg", AggFn::Avg}}};
    for (const auto& [n, f] : fns) expected_.insert(n);
    const Token& t = peek();
    if (t.kind != Tok::Ident) error();
    const auto name = lower(t.text);
    auto it = std::find_if(fns.begin(), fns.end(), [&](const auto& p) { return name == p.first; });
    if (it == fns.end()) error({"avg", "count", "max", "min", "sum"}, "unknown aggregate '" + t.text + "'");
    next();
    Aggregate a;
    a.fn = it->second;
    symbol("(");
    a.measure = ident("measure");
    symbol(")");
    return a;
  }

  Condition condition() {
    Condition left = conjunction();
    while (accept_keyword("or")) left = Condition::either(std::move(left), conjunction());
    return left;
  }

  Condition conjunction() {
    Condition left = negation();
    while (accept_keyword("and")) left = Condition::both(std::move(left), negation());
    return left;
  }

  Condition negation() {
    if (accept_keyword("not")) return Condition::negate(negation());
    return primary();
  }

  Condition primary() {
    if (accept_keyword("true")) return Condition::truth(true);
    if (accept_keyword("false")) return Condition::truth(false);
    if (accept_symbol("(")) {
      Condition c = condition();
      symbol(")");
      return c;
    }
    LevelRef ref = level_ref();
    CmpOp op = comparison();
    expected_.insert("member");
    const Token& t = peek();
    if (t.kind != Tok::String && t.kind != Tok::Int && t.kind != Tok::Number) error();
    std::string v = t.text;
    next();
    return Condition::atom(std::move(ref), op, std::move(v));
  }

  CmpOp comparison() {
    static const std::array<std::pair<const char*, CmpOp>, 9> ops = {{{"=", CmpOp::Eq},
                                                                      {"<>", CmpOp::Ne},
                                                                      {"!=", CmpOp::Ne},
                                                                      {"\xE2\x89\xA0", CmpOp::Ne},
                                                                      {"<=", CmpOp::Le},
                                                                      {"\xE2\x89\xA4", CmpOp::Le},
                                                                      {">=", CmpOp::Ge},
                                                                      {"\xE2\x89\xA5", CmpOp::Ge},
                                                                      {"<", CmpOp::Lt}}};
    for (const auto& [s, op] : ops) {
      if (accept_symbol(s)) return op;
    }
    if (accept_symbol(">")) return CmpOp::Gt;
    error();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> expected_;
};

bool plain_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return !is_keyword(lower(s));
}

std::string quote(std::string_view s, char q) {
  std::string out(1, q);
  for (char c : s) {
    if (c == q) out += q;
    out += c;
  }
  out += q;
  return out;
}

std::string id(std::string_view s) { return plain_ident(s) ? std::string(s) : quote(s, '"'); }

std::string level(const LevelRef& r) { return id(r.dimension) + "." + id(r.level); }

std::string value(const ParamValue& v) {
  switch (v.kind) {
    case ParamValue::Kind::Number: return v.text;
    case ParamValue::Kind::String: return quote(v.text, '\'');
    case ParamValue::Kind::Ident: return id(v.text);
  }
  return v.text;
}

int precedence(const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::Or: return 1;
    case Condition::Kind::And: return 2;
    case Condition::Kind::Not: return 3;
    default: return 4;
  }
}

std::string render_cond(const Condition& c) {
  auto wrap = [](const Condition& child, bool parens) {
    auto s = render_cond(child);
    return parens ? "(" + s + ")" : s;
  };
  switch (c.kind) {
    case Condition::Kind::True: return "true";
    case Condition::Kind::False: return "false";
    case Condition::Kind::Atom: return level(c.ref) + " " + to_string(c.op) + " " + quote(c.value, '\'');
    case Condition::Kind::Not: return "not " + wrap(c.children[0], precedence(c.children[0]) < 3);
    case Condition::Kind::And:
    case Condition::Kind::Or: {
      const int p = precedence(c);
      const char* op = c.kind == Condition::Kind::And ? " and " : " or ";
      return wrap(c.children[0], precedence(c.children[0]) < p) + op + wrap(c.children[1], precedence(c.children[1]) <= p);
    }
  }
  return "";
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + f(items[i]);
  return out;
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected, std::string found)
    : Error([&] {
        std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
        if (!expected.empty()) {
          msg += "expected ";
          msg += expected.size() == 1 ? expected[0] : "one of " + join(expected, [](const std::string& s) { return s; });
          msg += ", found ";
        } else {
          msg += "unexpected ";
        }
        return msg + found;
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

bool is_keyword(std::string_view word) {
  const auto lw = lower(word);
  return std::find(kKeywords.begin(), kKeywords.end(), lw) != kKeywords.end();
}

const char* to_string(Verb v) {
  switch (v) {
    case Verb::Describe: return "describe";
    case Verb::Assess: return "assess";
    case Verb::Explain: return "explain";
    case Verb::Predict: return "predict";
    case Verb::Suggest: return "suggest";
  }
  return "?";
}

const ParamValue* ModelCall::param(std::string_view key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return &v;
  }
  return nullptr;
}

Intention parse_intention(std::string_view text) { return Parser(text).intention(); }

CubeQuery parse_cube_query(std::string_view text) {
  Parser p(text);
  auto q = p.query();
  p.end();
  return q;
}

Condition parse_condition(std::string_view text) { return Parser(text).full_condition(); }

Statement parse_statement(std::string_view text) { return Parser(text).statement(); }

std::string render(const Condition& c) { return render_cond(c); }

std::string render(const CubeQuery& q) {
  std::string out = "cube " + id(q.source);
  if (!q.where.is_true()) out += " where " + render_cond(q.where);
  if (!q.group.empty()) out += " group " + join(q.group, level);
  out += " agg " + join(q.aggs, [](const Aggregate& a) { return std::string(to_string(a.fn)) + "(" + id(a.measure) + ")"; });
  return out;
}

std::string render(const QueryStatement& q) {
  auto out = render(q.query);
  if (q.alias) out += " as " + id(*q.alias);
  return out;
}

std::string render(const Intention& i) {
  std::string out = "with " + id(i.cube) + " " + to_string(i.verb());
  auto measures = [&] { return " " + join(i.measures, [](const std::string& m) { return id(m); }); };
  auto subcube = [&] { return i.subcube ? " for " + render_cond(*i.subcube) : std::string(); };
  switch (i.verb()) {
    case Verb::Describe: {
      const auto& d = std::get<DescribeClause>(i.clause);
      out += measures() + subcube();
      if (d.size) {
        out += " by size " + std::to_string(*d.size);
      } else if (!d.by.empty()) {
        out += " by " + join(d.by, level);
      }
      break;
    }
    case Verb::Assess: {
      const auto& a = std::get<AssessClause>(i.clause);
      out += measures() + subcube() + " using " + join(a.benchmarks, value);
      break;
    }
    case Verb::Explain: {
      const auto& e = std::get<ExplainClause>(i.clause);
      out += measures() + subcube() + " using " + join(e.models, [](const ModelCall& m) {
               std::vector<std::string> parts;
               for (const auto& a : m.args) {
                 std::string dotted;
                 std::size_t from = 0;
                 for (auto dot = a.find('.'); ; dot = a.find('.', from)) {
                   dotted += (from ? "." : "") + id(a.substr(from, dot - from));
                   if (dot == std::string::npos) break;
                   from = dot + 1;
                 }
                 parts.push_back(dotted);
               }
               for (const auto& [k, v] : m.params) parts.push_back(id(k) + "=" + value(v));
               return id(m.type) + "(" + join(parts, [](const std::string& s) { return s; }) + ")";
             });
      if (e.against) out += " against " + id(*e.against);
      break;
    }
    case Verb::Predict: {
      const auto& p = std::get<PredictClause>(i.clause);
      out += " next " + std::to_string(p.k) + " points of" + measures() + subcube() + " over " + id(p.over.dimension);
      if (!p.over.level.empty()) out += "." + id(p.over.level);
      out += " using " + id(p.model);
      break;
    }
    case Verb::Suggest: {
      const auto& s = std::get<SuggestClause>(i.clause);
      if (s.recommender) out += " using " + id(*s.recommender);
      break;
    }
  }
  if (i.alias) out += " as " + id(*i.alias);
  return out;
}

std::string render(const Statement& s) {
  return std::visit([](const auto& x) { return render(x); }, s);
}

}  // namespace intentcube::iql

// Copyright 2026 The hysafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hysafe/parser.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace hysafe {
namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Type { kIdent, kString, kInt, kReal, kPunct, kEnd };

  Type type = Type::kEnd;
  std::string text;  // identifier, unescaped string, or number spelling
  char punct = 0;
  SourceSpan span;
};

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view src, std::string file, std::vector<ParseError>& errors)
      : src_(src), file_(std::move(file)), errors_(errors) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (at_end()) break;
      int line = line_, col = col_;
      std::size_t start = pos_;
      char c = src_[pos_];
      Token t;
      if (c == '"') {
        if (!lex_string(t)) continue;
      } else if (ident_start(c)) {
        while (!at_end() && ident_char(src_[pos_])) advance();
        t.type = Token::Type::kIdent;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (digit(c) || (c == '-' && pos_ + 1 < src_.size() &&
                              digit(src_[pos_ + 1]))) {
        lex_number(t);
      } else if (std::string_view("{}(),:=").find(c) != std::string_view::npos) {
        advance();
        t.type = Token::Type::kPunct;
        t.punct = c;
        t.text = std::string(1, c);
      } else {
        advance();
        // Swallow UTF-8 continuation bytes so one character is one error.
        while (!at_end() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) {
          advance();
        }
        errors_.push_back({ParseError::Kind::kLexical,
                           span(line, col, pos_ - start),
                           fmt::format("illegal character '{}'",
                                       src_.substr(start, pos_ - start))});
        continue;
      }
      t.span = span(line, col, pos_ - start);
      out.push_back(std::move(t));
    }
    Token end;
    end.type = Token::Type::kEnd;
    end.span = span(line_, col_, 1);
    out.push_back(std::move(end));
    return out;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  SourceSpan span(int line, int col, std::size_t len) const {
    return SourceSpan{file_, line, col, std::max<int>(1, static_cast<int>(len))};
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool lex_string(Token& t) {
    int line = line_, col = col_;
    std::size_t start = pos_;
    advance();  // opening quote
    std::string value;
    bool ok = true;
    while (true) {
      if (at_end()) {
        errors_.push_back({ParseError::Kind::kLexical,
                           span(line, col, pos_ - start),
                           "unterminated string literal"});
        return false;
      }
      char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        int eline = line_, ecol = col_;
        advance();
        if (!at_end() && (src_[pos_] == '"' || src_[pos_] == '\\')) {
          value += src_[pos_];
          advance();
        } else {
          errors_.push_back({ParseError::Kind::kLexical, span(eline, ecol, 2),
                             "invalid escape sequence in string"});
          ok = false;
        }
        continue;
      }
      value += c;
      advance();
    }
    t.type = Token::Type::kString;
    t.text = std::move(value);
    return ok;
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    bool real = false;
    if (src_[pos_] == '-') advance();
    while (!at_end() && digit(src_[pos_])) advance();
    if (!at_end() && src_[pos_] == '.' && pos_ + 1 < src_.size() &&
        digit(src_[pos_ + 1])) {
      real = true;
      advance();
      while (!at_end() && digit(src_[pos_])) advance();
    }
    if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      int save_col = col_;
      advance();
      if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (!at_end() && digit(src_[pos_])) {
        real = true;
        while (!at_end() && digit(src_[pos_])) advance();
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    t.type = real ? Token::Type::kReal : Token::Type::kInt;
    t.text = std::string(src_.substr(start, pos_ - start));
  }

  std::string_view src_;
  std::string file_;
  std::vector<ParseError>& errors_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

struct Abort {};

struct Value {
  enum class Kind { kStrings, kInt, kReal, kIdents };
  Kind kind = Kind::kStrings;
  std::vector<std::string> items;  // strings or identifiers
  std::string number;
  SourceSpan span;
};

struct Entry {
  std::string key;
  SourceSpan key_span;
  Value value;
};

constexpr std::string_view kDeclKeywords[] = {
    "include",    "architecture", "component",  "pseudo_element",
    "interface",  "failure_mode", "fmea",       "fault_tree",
    "mitigation", "simulation"};

bool is_decl_keyword(const Token& t) {
  return t.type == Token::Type::kIdent &&
         std::find(std::begin(kDeclKeywords), std::end(kDeclKeywords),
                   t.text) != std::end(kDeclKeywords);
}

std::string describe(const Token& t) {
  switch (t.type) {
    case Token::Type::kEnd:
      return "end of input";
    case Token::Type::kString:
      return "string literal";
    case Token::Type::kPunct:
      return fmt::format("'{}'", t.punct);
    default:
      return fmt::format("'{}'", t.text);
  }
}

class Parser;

/// Key/value entries of one block, consumed by typed accessors.
class Block {
 public:
  Block(Parser& parser, std::string kind, SourceSpan where,
        std::vector<Entry> entries);

  std::optional<std::string> string(std::string_view key, bool required);
  std::optional<std::vector<std::string>> strings(std::string_view key);
  std::optional<std::string> ident(std::string_view key, bool required);
  std::optional<std::vector<std::string>> idents(std::string_view key,
                                                 bool required);
  std::optional<std::int64_t> integer(std::string_view key, bool required);
  std::optional<double> real(std::string_view key, bool required);
  const Entry* find(std::string_view key) const;
  void touch(std::string_view key) { taken_.emplace(key); }

  /// Reports keys nobody asked for.
  void finish();

  std::vector<Entry> remaining() const;

 private:
  const Entry* take(std::string_view key, bool required);
  Parser& parser_;
  std::string kind_;
  SourceSpan where_;
  std::vector<Entry> entries_;
  std::set<std::string, std::less<>> taken_;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string origin, HazardProject& project,
         std::vector<ParseError>& errors, const IncludeResolver& resolver,
         std::vector<std::string> include_stack)
      : tokens_(std::move(tokens)),
        origin_(std::move(origin)),
        project_(project),
        errors_(errors),
        resolver_(resolver),
        include_stack_(std::move(include_stack)) {}

  void run() {
    while (peek().type != Token::Type::kEnd) {
      if (!is_decl_keyword(peek())) {
        error(ParseError::Kind::kSyntax, peek().span,
              fmt::format("expected a declaration, found {}",
                          describe(peek())));
        depth_ = 0;
        ++pos_;
        resync();
        continue;
      }
      depth_ = 0;
      try {
        declaration();
      } catch (const Abort&) {
        resync();
      }
    }
  }

  void error(ParseError::Kind kind, const SourceSpan& span,
             std::string message) {
    errors_.push_back({kind, span, std::move(message)});
  }

  [[noreturn]] void fail(const SourceSpan& span, std::string message) {
    error(ParseError::Kind::kSyntax, span, std::move(message));
    throw Abort{};
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  const Token& next() {
    const Token& t = peek();
    if (t.type == Token::Type::kPunct) {
      if (t.punct == '{') ++depth_;
      if (t.punct == '}') --depth_;
    }
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  bool at_punct(char c, std::size_t ahead = 0) const {
    return peek(ahead).type == Token::Type::kPunct && peek(ahead).punct == c;
  }

  bool at_key(std::string_view key) const {
    return peek().type == Token::Type::kIdent && peek().text == key &&
           at_punct(':', 1);
  }

  const Token& expect_punct(char c) {
    if (!at_punct(c)) {
      fail(peek().span, fmt::format("expected '{}', found {}", c,
                                    describe(peek())));
    }
    return next();
  }

  const Token& expect_ident(std::string_view what) {
    if (peek().type != Token::Type::kIdent) {
      fail(peek().span,
           fmt::format("expected {}, found {}", what, describe(peek())));
    }
    return next();
  }

  const Token& expect_string(std::string_view what) {
    if (peek().type != Token::Type::kString) {
      fail(peek().span,
           fmt::format("expected {}, found {}", what, describe(peek())));
    }
    return next();
  }

  // Skips the rest of a broken declaration.
  void resync() {
    while (peek().type != Token::Type::kEnd) {
      if (depth_ <= 0 && is_decl_keyword(peek())) return;
      bool closes = at_punct('}');
      next();
      if (closes && depth_ <= 0) return;
    }
  }

  void record(const std::string& key, const SourceSpan& span) {
    project_.locations.emplace(key, span);
  }

  Value value() {
    Value v;
    v.span = peek().span;
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::kString:
        v.kind = Value::Kind::kStrings;
        v.items.push_back(next().text);
        while (at_punct(',')) {
          next();
          v.items.push_back(expect_string("string after ','").text);
        }
        break;
      case Token::Type::kIdent:
        v.kind = Value::Kind::kIdents;
        v.items.push_back(next().text);
        while (at_punct(',')) {
          next();
          v.items.push_back(expect_ident("identifier after ','").text);
        }
        break;
      case Token::Type::kInt:
      case Token::Type::kReal:
        v.kind = t.type == Token::Type::kInt ? Value::Kind::kInt
                                             : Value::Kind::kReal;
        v.number = next().text;
        break;
      default:
        fail(t.span, fmt::format("expected a value, found {}", describe(t)));
    }
    return v;
  }

  Entry entry() {
    const Token& key = expect_ident("a key");
    Entry e;
    e.key = key.text;
    e.key_span = key.span;
    expect_punct(':');
    e.value = value();
    return e;
  }

  // Parses `{ key: value ... }`. Duplicate keys are reported unless
  // `allow_repeats`.
  std::vector<Entry> entries(bool allow_repeats) {
    expect_punct('{');
    std::vector<Entry> out;
    std::set<std::string> seen;
    while (!at_punct('}')) {
      if (peek().type == Token::Type::kEnd) {
        fail(peek().span, "unexpected end of input, expected '}'");
      }
      Entry e = entry();
      if (!allow_repeats && !seen.insert(e.key).second) {
        error(ParseError::Kind::kDuplicateKey, e.key_span,
              fmt::format("duplicate key '{}'", e.key));
        continue;
      }
      out.push_back(std::move(e));
    }
    expect_punct('}');
    return out;
  }

  void declaration() {
    const Token& kw = next();
    if (kw.text == "include") {
      include_directive(kw);
    } else if (kw.text == "architecture") {
      architecture(kw);
    } else if (kw.text == "component") {
      component();
    } else if (kw.text == "pseudo_element") {
      const Token& id = expect_ident("pseudo-element identifier");
      record("pseudo_element:" + id.text, id.span);
      project_.architecture.pseudo_elements.push_back(id.text);
    } else if (kw.text == "interface") {
      interface_decl();
    } else if (kw.text == "failure_mode") {
      failure_mode();
    } else if (kw.text == "fmea") {
      fmea();
    } else if (kw.text == "fault_tree") {
      fault_tree();
    } else if (kw.text == "mitigation") {
      mitigation();
    } else if (kw.text == "simulation") {
      simulation(kw);
    }
  }

  void include_directive(const Token& kw) {
    const Token& path_tok = expect_string("include path");
    fs::path base = fs::path(origin_).parent_path();
    std::string target = (base / path_tok.text).lexically_normal().string();
    std::string self = fs::path(origin_).lexically_normal().string();

    bool cyclic = target == self ||
                  std::find(include_stack_.begin(), include_stack_.end(),
                            target) != include_stack_.end();
    if (cyclic) {
      error(ParseError::Kind::kInclude, path_tok.span,
            fmt::format("include cycle: '{}' includes '{}'", self, target));
      return;
    }
    if (include_stack_.size() > 1) {
      error(ParseError::Kind::kInclude, kw.span,
            fmt::format("nested include of '{}' (only one include level is "
                        "supported)",
                        target));
      return;
    }
    std::optional<std::string> text = resolver_ ? resolver_(target)
                                                : std::nullopt;
    if (!text) {
      error(ParseError::Kind::kInclude, path_tok.span,
            fmt::format("cannot read included file '{}'", target));
      return;
    }
    Lexer lexer(*text, target, errors_);
    auto stack = include_stack_;
    stack.push_back(target);
    Parser sub(lexer.run(), target, project_, errors_, resolver_,
               std::move(stack));
    sub.run();
  }

  void architecture(const Token& kw) {
    Block b(*this, "architecture", kw.span, entries(false));
    if (auto name = b.string("name", false)) {
      project_.architecture.name = *name;
    }
    for (const Entry& e : b.remaining()) {
      if (e.value.kind != Value::Kind::kStrings || e.value.items.size() != 1) {
        error(ParseError::Kind::kSyntax, e.value.span,
              fmt::format("annotation '{}' expects a string", e.key));
        continue;
      }
      if (!project_.architecture.annotations.emplace(e.key, e.value.items[0])
               .second) {
        error(ParseError::Kind::kDuplicateKey, e.key_span,
              fmt::format("duplicate annotation '{}'", e.key));
      }
    }
    record("architecture", kw.span);
  }

  void component() {
    const Token& id = expect_ident("component identifier");
    Component c;
    c.id = id.text;
    Block b(*this, "component", id.span, entries(false));
    c.name = b.string("name", false).value_or("");
    c.functionality = b.string("functionality", false).value_or("");
    c.inputs = b.idents("inputs", false).value_or(std::vector<std::string>{});
    c.outputs = b.idents("outputs", false).value_or(std::vector<std::string>{});
    c.features = b.strings("features").value_or(std::vector<std::string>{});
    b.finish();
    record("component:" + c.id, id.span);
    project_.architecture.components.push_back(std::move(c));
  }

  void interface_decl() {
    const Token& id = expect_ident("interface identifier");
    Interface itf;
    itf.id = id.text;
    Block b(*this, "interface", id.span, entries(false));
    itf.producer = b.ident("from", true).value_or("");
    itf.consumers = b.idents("to", true).value_or(std::vector<std::string>{});
    itf.payload = b.string("payload", false).value_or("");
    b.finish();
    record("interface:" + itf.id, id.span);
    project_.architecture.interfaces.push_back(std::move(itf));
  }

  void failure_mode() {
    const Token& id = expect_ident("failure mode identifier");
    AiFailureMode mode;
    mode.id = id.text;
    Block b(*this, "failure_mode", id.span, entries(false));
    mode.label = b.string("label", true).value_or("");
    if (const Entry* gw = b.find("guidewords");
        gw && gw->value.kind == Value::Kind::kIdents) {
      for (const auto& token : gw->value.items) {
        if (auto g = parse_guideword(token)) {
          mode.guidewords.insert(*g);
        } else {
          error(ParseError::Kind::kSyntax, gw->value.span,
                fmt::format("unknown guideword '{}' (expected IncorrectValue, "
                            "MissingValue, ValueTooHigh, ValueTooLow or "
                            "IncorrectTiming)",
                            token));
        }
      }
    }
    b.idents("guidewords", true);
    mode.description = b.string("description", false).value_or("");
    b.finish();
    record("failure_mode:" + mode.id, id.span);
    project_.taxonomy.push_back(std::move(mode));
  }

  void fmea() {
    const Token& id = expect_ident("fmea identifier");
    FmeaEntry e;
    e.id = id.text;
    Block b(*this, "fmea", id.span, entries(false));
    e.element = b.ident("element", true).value_or("");
    e.failure_mode = b.ident("mode", true).value_or("");
    e.manifestation = b.string("manifestation", true).value_or("");
    e.effect = b.string("effect", true).value_or("");
    e.caused_by = b.string("cause", true).value_or("");
    auto rating = [&](std::string_view key, int& out) {
      if (auto v = b.integer(key, true)) {
        const Entry* entry = b.find(key);
        if (!rating_in_range(static_cast<int>(std::clamp<std::int64_t>(*v, -1, 11)))) {
          error(ParseError::Kind::kOutOfRange, entry->value.span,
                fmt::format("{} out of range [1,10] (got {})", key,
                            entry->value.number));
        } else {
          out = static_cast<int>(*v);
        }
        record(fmt::format("fmea:{}.{}", e.id, key), entry->value.span);
      }
    };
    rating("severity", e.rating.severity);
    rating("occurrence", e.rating.occurrence);
    rating("detection", e.rating.detection);
    b.finish();
    record("fmea:" + e.id, id.span);
    if (const Entry* el = b.find("element")) {
      record("fmea:" + e.id + ".element", el->value.span);
    }
    if (const Entry* m = b.find("mode")) {
      record("fmea:" + e.id + ".mode", m->value.span);
    }
    project_.fmea.push_back(std::move(e));
  }

  std::optional<double> probability_literal(std::string_view what) {
    const Token& t = peek();
    if (t.type != Token::Type::kInt && t.type != Token::Type::kReal) {
      fail(t.span, fmt::format("expected a number for '{}', found {}", what,
                               describe(t)));
    }
    next();
    double v = 0;
    auto [ptr, ec] =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || !(v >= 0.0 && v <= 1.0)) {
      error(ParseError::Kind::kOutOfRange, t.span,
            fmt::format("{} must lie in [0,1] (got {})", what, t.text));
      return std::nullopt;
    }
    return v;
  }

  void fault_tree() {
    const Token& id = expect_ident("fault tree identifier");
    FaultTree tree;
    tree.id = id.text;
    record("fault_tree:" + tree.id, id.span);
    expect_punct('{');
    bool have_top = false;
    std::set<std::string> node_ids;
    while (!at_punct('}')) {
      if (peek().type == Token::Type::kEnd) {
        fail(peek().span, "unexpected end of input, expected '}'");
      }
      if (at_key("top")) {
        const Token& key = next();
        next();  // ':'
        const Token& top = expect_ident("top node identifier");
        if (have_top) {
          error(ParseError::Kind::kDuplicateKey, key.span,
                "duplicate key 'top'");
        }
        have_top = true;
        tree.top = top.text;
        continue;
      }
      const Token& node_id = expect_ident("node identifier or 'top:'");
      if (!at_punct('=')) {
        fail(peek().span, fmt::format("expected '=' after node '{}', found {}",
                                      node_id.text, describe(peek())));
      }
      next();
      FaultNode node;
      node.id = node_id.text;
      const Token& kind = expect_ident("'AND', 'OR' or 'event'");
      if (kind.text == "AND" || kind.text == "OR") {
        Gate g;
        g.kind = kind.text == "AND" ? GateKind::kAnd : GateKind::kOr;
        expect_punct('(');
        g.children.push_back(expect_ident("child node identifier").text);
        while (at_punct(',')) {
          next();
          g.children.push_back(expect_ident("child node identifier").text);
        }
        expect_punct(')');
        if (at_key("label")) {
          next();
          next();
          g.label = expect_string("gate label").text;
        }
        node.body = std::move(g);
      } else if (kind.text == "event") {
        BasicEvent e;
        std::set<std::string> seen;
        while (at_key("p") || at_key("fmea") || at_key("label")) {
          const Token& key = next();
          next();
          if (!seen.insert(key.text).second) {
            error(ParseError::Kind::kDuplicateKey, key.span,
                  fmt::format("duplicate key '{}'", key.text));
          }
          if (key.text == "p") {
            e.probability = probability_literal("probability");
          } else if (key.text == "fmea") {
            e.fmea_link = expect_ident("fmea identifier").text;
          } else {
            e.label = expect_string("event label").text;
          }
        }
        node.body = std::move(e);
      } else {
        fail(kind.span, fmt::format("expected 'AND', 'OR' or 'event', found "
                                    "'{}'",
                                    kind.text));
      }
      if (!node_ids.insert(node.id).second) {
        error(ParseError::Kind::kDuplicateKey, node_id.span,
              fmt::format("node '{}' defined twice in tree '{}'", node.id,
                          tree.id));
        continue;
      }
      record("fault_tree:" + tree.id + "/" + node.id, node_id.span);
      tree.nodes.push_back(std::move(node));
    }
    expect_punct('}');
    if (!have_top) {
      error(ParseError::Kind::kSyntax, id.span,
            fmt::format("fault tree '{}' lacks 'top:'", tree.id));
    }
    project_.trees.push_back(std::move(tree));
  }

  void mitigation() {
    const Token& id = expect_ident("mitigation identifier");
    Mitigation m;
    m.id = id.text;
    std::vector<Entry> list = entries(true);
    bool have_name = false, have_comment = false;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Entry& e = list[i];
      auto single_string = [&](std::string& out, bool& have) {
        if (have) {
          error(ParseError::Kind::kDuplicateKey, e.key_span,
                fmt::format("duplicate key '{}'", e.key));
        }
        have = true;
        if (e.value.kind != Value::Kind::kStrings || e.value.items.size() != 1) {
          error(ParseError::Kind::kSyntax, e.value.span,
                fmt::format("'{}' expects a string", e.key));
          return;
        }
        out = e.value.items[0];
      };
      auto follower = [&](std::string_view key) -> const Entry* {
        if (i + 1 < list.size() && list[i + 1].key == key) return &list[++i];
        return nullptr;
      };
      auto single_ident = [&](const Entry& en) -> std::string {
        if (en.value.kind != Value::Kind::kIdents || en.value.items.size() != 1) {
          error(ParseError::Kind::kSyntax, en.value.span,
                fmt::format("'{}' expects one identifier", en.key));
          return {};
        }
        return en.value.items[0];
      };

      if (e.key == "name") {
        single_string(m.name, have_name);
      } else if (e.key == "comment") {
        single_string(m.comment, have_comment);
      } else if (e.key == "fmea_target") {
        FmeaTarget t;
        t.entry = single_ident(e);
        const Entry* delta = follower("delta_d");
        if (!delta) {
          error(ParseError::Kind::kSyntax, e.key_span,
                "'fmea_target' must be followed by 'delta_d'");
          continue;
        }
        if (delta->value.kind != Value::Kind::kInt) {
          error(ParseError::Kind::kSyntax, delta->value.span,
                "'delta_d' expects an integer");
          continue;
        }
        std::int64_t d = 0;
        auto [ptr, ec] = std::from_chars(
            delta->value.number.data(),
            delta->value.number.data() + delta->value.number.size(), d);
        if (ec != std::errc() || d >= 0 || d <= -kMaxRating) {
          error(ParseError::Kind::kOutOfRange, delta->value.span,
                fmt::format("delta_d must be a negative integer above -10 "
                            "(got {})",
                            delta->value.number));
          continue;
        }
        t.detection_delta = static_cast<int>(d);
        m.fmea_targets.push_back(std::move(t));
      } else if (e.key == "fta_target") {
        FtaTarget t;
        t.event = single_ident(e);
        const Entry* monitor = follower("monitor");
        if (!monitor) {
          error(ParseError::Kind::kSyntax, e.key_span,
                "'fta_target' must be followed by 'monitor'");
          continue;
        }
        if (monitor->value.kind != Value::Kind::kStrings ||
            monitor->value.items.size() != 1) {
          error(ParseError::Kind::kSyntax, monitor->value.span,
                "'monitor' expects a string");
          continue;
        }
        t.monitor_label = monitor->value.items[0];
        if (const Entry* miss = follower("miss_p")) {
          double v = -1;
          bool numeric = miss->value.kind == Value::Kind::kInt ||
                         miss->value.kind == Value::Kind::kReal;
          if (numeric) {
            std::from_chars(miss->value.number.data(),
                            miss->value.number.data() +
                                miss->value.number.size(),
                            v);
          }
          if (!numeric) {
            error(ParseError::Kind::kSyntax, miss->value.span,
                  "'miss_p' expects a number");
          } else if (!(v >= 0.0 && v <= 1.0)) {
            error(ParseError::Kind::kOutOfRange, miss->value.span,
                  fmt::format("miss_p must lie in [0,1] (got {})",
                              miss->value.number));
          } else {
            t.miss_probability = v;
          }
        }
        m.fta_targets.push_back(std::move(t));
      } else {
        error(ParseError::Kind::kSyntax, e.key_span,
              fmt::format("unknown key '{}' in mitigation", e.key));
      }
    }
    if (!have_name) {
      error(ParseError::Kind::kSyntax, id.span,
            fmt::format("mitigation '{}' lacks 'name'", m.id));
    }
    record("mitigation:" + m.id, id.span);
    project_.mitigations.push_back(std::move(m));
  }

  void simulation(const Token& kw) {
    Block b(*this, "simulation", kw.span, entries(false));
    SimulationConfig c;
    if (auto trials = b.integer("trials", true)) {
      if (*trials < 1) {
        error(ParseError::Kind::kOutOfRange, b.find("trials")->value.span,
              "trials must be >= 1");
      }
      c.trials = *trials;
    }
    if (const Entry* seed = b.find("seed")) {
      std::uint64_t s = 0;
      const auto& text = seed->value.number;
      auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), s);
      if (seed->value.kind != Value::Kind::kInt) {
        error(ParseError::Kind::kSyntax, seed->value.span,
              "'seed' expects an integer");
      } else if (ec != std::errc() || ptr != text.data() + text.size()) {
        error(ParseError::Kind::kOutOfRange, seed->value.span,
              fmt::format("seed must be an unsigned 64-bit integer (got {})",
                          text));
      } else {
        c.seed = s;
      }
    } else {
      error(ParseError::Kind::kSyntax, kw.span, "simulation lacks 'seed'");
    }
    b.touch("seed");
    auto scale = [&](std::string_view key, double& out) {
      if (auto v = b.real(key, false)) {
        if (!(*v > 0.0) || !std::isfinite(*v)) {
          error(ParseError::Kind::kOutOfRange, b.find(key)->value.span,
                fmt::format("{} must be > 0", key));
        } else {
          out = *v;
        }
      }
    };
    scale("occurrence_scale", c.occurrence_scale);
    scale("detection_scale", c.detection_scale);
    b.finish();
    if (project_.sim_config) {
      error(ParseError::Kind::kDuplicateKey, kw.span,
            "simulation block declared twice");
    }
    record("simulation", kw.span);
    project_.sim_config = c;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::string origin_;
  HazardProject& project_;
  std::vector<ParseError>& errors_;
  const IncludeResolver& resolver_;
  std::vector<std::string> include_stack_;

  friend class Block;
};

Block::Block(Parser& parser, std::string kind, SourceSpan where,
             std::vector<Entry> entries)
    : parser_(parser),
      kind_(std::move(kind)),
      where_(std::move(where)),
      entries_(std::move(entries)) {}

const Entry* Block::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const Entry* Block::take(std::string_view key, bool required) {
  taken_.emplace(key);
  const Entry* e = find(key);
  if (!e && required) {
    parser_.error(ParseError::Kind::kSyntax, where_,
                  fmt::format("{} lacks required key '{}'", kind_, key));
  }
  return e;
}

std::optional<std::string> Block::string(std::string_view key, bool required) {
  const Entry* e = take(key, required);
  if (!e) return std::nullopt;
  if (e->value.kind != Value::Kind::kStrings || e->value.items.size() != 1) {
    parser_.error(ParseError::Kind::kSyntax, e->value.span,
                  fmt::format("'{}' expects a string", key));
    return std::nullopt;
  }
  return e->value.items[0];
}

std::optional<std::vector<std::string>> Block::strings(std::string_view key) {
  const Entry* e = take(key, false);
  if (!e) return std::nullopt;
  if (e->value.kind != Value::Kind::kStrings) {
    parser_.error(ParseError::Kind::kSyntax, e->value.span,
                  fmt::format("'{}' expects a list of strings", key));
    return std::nullopt;
  }
  return e->value.items;
}

std::optional<std::string> Block::ident(std::string_view key, bool required) {
  auto list = idents(key, required);
  if (!list) return std::nullopt;
  if (list->size() != 1) {
    parser_.error(ParseError::Kind::kSyntax, find(key)->value.span,
                  fmt::format("'{}' expects a single identifier", key));
    return std::nullopt;
  }
  return list->front();
}

std::optional<std::vector<std::string>> Block::idents(std::string_view key,
                                                      bool required) {
  const Entry* e = take(key, required);
  if (!e) return std::nullopt;
  if (e->value.kind != Value::Kind::kIdents) {
    parser_.error(ParseError::Kind::kSyntax, e->value.span,
                  fmt::format("'{}' expects identifiers", key));
    return std::nullopt;
  }
  return e->value.items;
}

std::optional<std::int64_t> Block::integer(std::string_view key,
                                           bool required) {
  const Entry* e = take(key, required);
  if (!e) return std::nullopt;
  if (e->value.kind != Value::Kind::kInt) {
    parser_.error(ParseError::Kind::kSyntax, e->value.span,
                  fmt::format("'{}' expects an integer", key));
    return std::nullopt;
  }
  std::int64_t v = 0;
  const auto& text = e->value.number;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc()) {
    // Saturate so range checks still report the literal.
    return text.front() == '-' ? std::numeric_limits<std::int64_t>::min()
                               : std::numeric_limits<std::int64_t>::max();
  }
  return v;
}

std::optional<double> Block::real(std::string_view key, bool required) {
  const Entry* e = take(key, required);
  if (!e) return std::nullopt;
  if (e->value.kind != Value::Kind::kInt &&
      e->value.kind != Value::Kind::kReal) {
    parser_.error(ParseError::Kind::kSyntax, e->value.span,
                  fmt::format("'{}' expects a number", key));
    return std::nullopt;
  }
  double v = 0;
  const auto& text = e->value.number;
  std::from_chars(text.data(), text.data() + text.size(), v);
  return v;
}

void Block::finish() {
  for (const auto& e : entries_) {
    if (!taken_.count(e.key)) {
      parser_.error(ParseError::Kind::kSyntax, e.key_span,
                    fmt::format("unknown key '{}' in {}", e.key, kind_));
    }
  }
}

std::vector<Entry> Block::remaining() const {
  std::vector<Entry> out;
  for (const auto& e : entries_) {
    if (!taken_.count(e.key)) out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serializer

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& items, bool quoted) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += quoted ? quote(items[i]) : items[i];
  }
  return out;
}

}  // namespace

std::string format_parse_error(const ParseError& e) {
  return fmt::format("{}:{}:{}: error: {}", e.span.file, e.span.line,
                     e.span.column, e.message);
}

bool ParseResult::only_range_errors() const {
  return !errors.empty() &&
         std::all_of(errors.begin(), errors.end(), [](const ParseError& e) {
           return e.kind == ParseError::Kind::kOutOfRange;
         });
}

IncludeResolver filesystem_resolver() {
  return [](const std::string& path) -> std::optional<std::string> {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
}

namespace {

void parse_into(std::string_view source, const std::string& origin,
                const IncludeResolver& resolver, HazardProject& project,
                std::vector<ParseError>& errors) {
  Lexer lexer(source, origin, errors);
  std::string self = fs::path(origin).lexically_normal().string();
  Parser parser(lexer.run(), origin, project, errors, resolver, {self});
  parser.run();
}

ParseResult finish(HazardProject project, std::vector<ParseError> errors) {
  ParseResult result;
  std::stable_sort(errors.begin(), errors.end(),
                   [](const ParseError& a, const ParseError& b) {
                     return a.span < b.span;
                   });
  result.errors = std::move(errors);
  if (result.errors.empty()) result.project = std::move(project);
  return result;
}

}  // namespace

ParseResult parse(std::string_view source, const std::string& origin,
                  const IncludeResolver& resolver) {
  HazardProject project;
  std::vector<ParseError> errors;
  parse_into(source, origin, resolver, project, errors);
  return finish(std::move(project), std::move(errors));
}

ParseResult parse_file(const std::string& path,
                       const IncludeResolver& resolver) {
  return parse_files({path}, resolver);
}

ParseResult parse_files(const std::vector<std::string>& paths,
                        const IncludeResolver& resolver) {
  HazardProject project;
  std::vector<ParseError> errors;
  for (const auto& path : paths) {
    std::optional<std::string> text = resolver ? resolver(path) : std::nullopt;
    if (!text) {
      errors.push_back({ParseError::Kind::kInclude, SourceSpan{path, 1, 1, 1},
                        fmt::format("cannot read file '{}'", path)});
      continue;
    }
    parse_into(*text, path, resolver, project, errors);
  }
  return finish(std::move(project), std::move(errors));
}

std::string serialize(const HazardProject& p) {
  std::string out;
  auto block_sep = [&] {
    if (!out.empty()) out += "\n";
  };
  auto kv = [&](std::string_view key, std::string_view value) {
    out += fmt::format("  {}: {}\n", key, value);
  };

  const auto& arch = p.architecture;
  if (!arch.name.empty() || !arch.annotations.empty()) {
    out += "architecture {\n";
    if (!arch.name.empty()) kv("name", quote(arch.name));
    for (const auto& [key, value] : arch.annotations) kv(key, quote(value));
    out += "}\n";
  }
  if (!arch.pseudo_elements.empty()) {
    block_sep();
    for (const auto& pseudo : arch.pseudo_elements) {
      out += fmt::format("pseudo_element {}\n", pseudo);
    }
  }
  for (const auto& c : arch.components) {
    block_sep();
    out += fmt::format("component {} {{\n", c.id);
    if (!c.name.empty()) kv("name", quote(c.name));
    if (!c.functionality.empty()) kv("functionality", quote(c.functionality));
    if (!c.inputs.empty()) kv("inputs", join(c.inputs, false));
    if (!c.outputs.empty()) kv("outputs", join(c.outputs, false));
    if (!c.features.empty()) kv("features", join(c.features, true));
    out += "}\n";
  }
  for (const auto& itf : arch.interfaces) {
    block_sep();
    out += fmt::format("interface {} {{\n", itf.id);
    kv("from", itf.producer);
    kv("to", join(itf.consumers, false));
    if (!itf.payload.empty()) kv("payload", quote(itf.payload));
    out += "}\n";
  }
  for (const auto& mode : p.taxonomy) {
    block_sep();
    out += fmt::format("failure_mode {} {{\n", mode.id);
    kv("label", quote(mode.label));
    std::vector<std::string> gws;
    for (Guideword g : mode.guidewords) {
      gws.emplace_back(guideword_token(g));
    }
    kv("guidewords", join(gws, false));
    if (!mode.description.empty()) kv("description", quote(mode.description));
    out += "}\n";
  }
  for (const auto& e : p.fmea) {
    block_sep();
    out += fmt::format("fmea {} {{\n", e.id);
    kv("element", e.element);
    kv("mode", e.failure_mode);
    kv("manifestation", quote(e.manifestation));
    kv("effect", quote(e.effect));
    kv("cause", quote(e.caused_by));
    kv("severity", std::to_string(e.rating.severity));
    kv("occurrence", std::to_string(e.rating.occurrence));
    kv("detection", std::to_string(e.rating.detection));
    out += "}\n";
  }
  for (const auto& tree : p.trees) {
    block_sep();
    out += fmt::format("fault_tree {} {{\n", tree.id);
    kv("top", tree.top);
    for (const auto& node : tree.nodes) {
      if (node.is_gate()) {
        const Gate& g = node.gate();
        out += fmt::format("  {} = {}({})", node.id, gate_keyword(g.kind),
                           join(g.children, false));
        if (!g.label.empty()) out += " label: " + quote(g.label);
      } else {
        const BasicEvent& e = node.event();
        out += fmt::format("  {} = event", node.id);
        if (e.probability) out += " p: " + number(*e.probability);
        if (e.fmea_link) out += " fmea: " + *e.fmea_link;
        if (!e.label.empty()) out += " label: " + quote(e.label);
      }
      out += "\n";
    }
    out += "}\n";
  }
  for (const auto& m : p.mitigations) {
    block_sep();
    out += fmt::format("mitigation {} {{\n", m.id);
    kv("name", quote(m.name));
    if (!m.comment.empty()) kv("comment", quote(m.comment));
    for (const auto& t : m.fmea_targets) {
      out += fmt::format("  fmea_target: {} delta_d: {}\n", t.entry,
                         t.detection_delta);
    }
    for (const auto& t : m.fta_targets) {
      out += fmt::format("  fta_target: {} monitor: {}", t.event,
                         quote(t.monitor_label));
      if (t.miss_probability) out += " miss_p: " + number(*t.miss_probability);
      out += "\n";
    }
    out += "}\n";
  }
  if (p.sim_config) {
    const auto& c = *p.sim_config;
    block_sep();
    out += "simulation {\n";
    kv("trials", std::to_string(c.trials));
    kv("seed", std::to_string(c.seed));
    kv("occurrence_scale", number(c.occurrence_scale));
    kv("detection_scale", number(c.detection_scale));
    out += "}\n";
  }
  return out;
}

}  // namespace hysafe

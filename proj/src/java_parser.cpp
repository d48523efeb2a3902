#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "qualimeter/ingest.hpp"

namespace qualimeter {

namespace fs = std::filesystem;

std::string Diagnostic::describe() const {
  std::string out = severity == Severity::kError ? "error: " : "warning: ";
  out += path;
  if (line > 0) out += ":" + std::to_string(line);
  return out + ": " + message;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { kIdent, kNumber, kString, kChar, kPunct };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
};

const std::unordered_set<std::string> kKeywords = {
    "abstract", "assert",     "boolean",  "break",     "byte",      "case",     "catch",   "char",
    "class",    "const",      "continue", "default",   "do",        "double",   "else",    "enum",
    "extends",  "final",      "finally",  "float",     "for",       "goto",     "if",      "implements",
    "import",   "instanceof", "int",      "interface", "long",      "native",   "new",     "package",
    "private",  "protected",  "public",   "return",    "short",     "static",   "strictfp", "super",
    "switch",   "synchronized", "this",   "throw",     "throws",    "transient", "try",    "void",
    "volatile", "while",      "true",     "false",     "null",      "var",      "yield"};

const std::unordered_set<std::string> kOperatorKeywords = {
    "if",    "else",   "for",   "while", "do",         "switch", "case",   "default",      "return", "new",
    "throw", "try",    "catch", "finally", "break",    "continue", "instanceof", "assert", "synchronized",
    "yield"};

const std::unordered_set<std::string> kOperandKeywords = {"true", "false", "null", "this", "super"};

const std::unordered_set<std::string> kModifiers = {"public",   "protected", "private",  "static",
                                                     "final",    "abstract",  "native",   "synchronized",
                                                     "transient", "volatile", "strictfp", "default",
                                                     "sealed"};

const std::unordered_set<std::string> kDecisionKeywords = {"if", "for", "while", "case", "catch"};
const std::unordered_set<std::string> kStatementKeywords = {"if", "for", "while", "do", "switch", "try"};

// Longest first so that greedy matching works. '>' is always emitted alone
// (except in assignment forms) so nested generic closers stay balanced.
const std::vector<std::string> kPunctuators = {
    ">>>=", "<<=", ">>=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=",
    "-=",   "*=",  "/=",  "%=",  "&=", "|=", "^=", "<<"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

struct LexResult {
  std::vector<Token> tokens;
  long brace_balance = 0;
  std::size_t first_unbalanced_line = 0;
  bool unterminated = false;
};

LexResult lex(std::string_view src) {
  LexResult out;
  std::size_t line = 1;
  std::size_t i = 0;
  const auto n = src.size();
  auto count_newlines = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to && k < n; ++k) line += src[k] == '\n' ? 1 : 0;
  };
  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      auto end = src.find("*/", i + 2);
      if (end == std::string_view::npos) {
        out.unterminated = true;
        count_newlines(i, n);
        break;
      }
      count_newlines(i, end);
      i = end + 2;
      continue;
    }
    if (c == '"' && src.substr(i, 3) == "\"\"\"") {
      auto end = src.find("\"\"\"", i + 3);
      while (end != std::string_view::npos && src[end - 1] == '\\') end = src.find("\"\"\"", end + 1);
      if (end == std::string_view::npos) {
        out.unterminated = true;
        break;
      }
      out.tokens.push_back({Tok::kString, std::string(src.substr(i, end + 3 - i)), line});
      count_newlines(i, end);
      i = end + 3;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t k = i + 1;
      while (k < n && src[k] != c && src[k] != '\n') k += src[k] == '\\' ? 2 : 1;
      if (k >= n || src[k] != c) {
        out.unterminated = true;
        k = std::min(k, n);
        out.tokens.push_back({c == '"' ? Tok::kString : Tok::kChar, std::string(src.substr(i, k - i)), line});
        i = k;
        continue;
      }
      out.tokens.push_back({c == '"' ? Tok::kString : Tok::kChar, std::string(src.substr(i, k + 1 - i)), line});
      i = k + 1;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t k = i;
      while (k < n) {
        const char d = src[k];
        if (ident_part(d) || d == '.') {
          ++k;
        } else if ((d == '+' || d == '-') && k > i && (src[k - 1] == 'e' || src[k - 1] == 'E' || src[k - 1] == 'p' ||
                                                       src[k - 1] == 'P') &&
                   !(src[i] == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X') &&
                     (src[k - 1] == 'e' || src[k - 1] == 'E'))) {
          ++k;
        } else {
          break;
        }
      }
      out.tokens.push_back({Tok::kNumber, std::string(src.substr(i, k - i)), line});
      i = k;
      continue;
    }
    if (ident_start(c)) {
      std::size_t k = i + 1;
      while (k < n && ident_part(src[k])) ++k;
      out.tokens.push_back({Tok::kIdent, std::string(src.substr(i, k - i)), line});
      i = k;
      continue;
    }
    std::string punct(1, c);
    for (const auto& p : kPunctuators) {
      if (src.compare(i, p.size(), p) == 0) {
        punct = p;
        break;
      }
    }
    if (c == '{') {
      ++out.brace_balance;
    } else if (c == '}') {
      if (--out.brace_balance < 0 && out.first_unbalanced_line == 0) out.first_unbalanced_line = line;
    }
    out.tokens.push_back({Tok::kPunct, punct, line});
    i += punct.size();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Raw extraction (pass 1)

struct RawParam {
  std::string name;
  std::string type;
};

struct RawMethod {
  MethodDecl decl;
  std::vector<RawParam> params;
  std::set<std::string> type_params;
  bool has_body = false;
  std::size_t body_begin = 0;  // first token inside the braces
  std::size_t body_end = 0;    // index of the closing brace
  std::size_t first_line = 0;
  std::size_t last_line = 0;
};

struct RawType {
  TypeDecl decl;
  std::string simple;
  std::vector<std::string> enclosing;  // qualified names, innermost first
  std::set<std::string> type_params;
  std::vector<RawMethod> methods;
  std::vector<std::pair<std::size_t, std::size_t>> initializer_blocks;  // [begin, end) token ranges
  std::size_t file = 0;
  std::size_t first_line = 0;
  std::size_t last_line = 0;
};

struct FileContext {
  std::string path;
  std::string package;
  std::map<std::string, std::string> imports;  // simple -> qualified
  std::vector<std::string> wildcard_imports;
  std::vector<Token> tokens;
  std::vector<LineKind> kinds;
};

class ParseFailure : public std::runtime_error {
 public:
  ParseFailure(std::size_t line, const std::string& what) : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Modifiers {
  Visibility visibility = Visibility::kPackage;
  bool explicit_visibility = false;
  bool is_static = false;
  bool is_abstract = false;
  bool is_default = false;
  bool overrides = false;
};

class FileParser {
 public:
  FileParser(FileContext& file, std::size_t file_index, std::vector<RawType>& out)
      : f_(file), toks_(file.tokens), file_index_(file_index), out_(out) {}

  void parse() {
    std::size_t i = 0;
    i = skip_annotations(i);
    if (is(i, "package")) {
      auto [name, next] = qualified_name(i + 1);
      f_.package = name;
      i = expect(next, ";");
    } else {
      i = 0;
    }
    while (is(i, "import")) {
      std::size_t k = i + 1;
      bool is_static = false;
      if (is(k, "static")) {
        is_static = true;
        ++k;
      }
      auto [name, next] = qualified_name(k);
      if (is(next, ".") && is(next + 1, "*")) {
        if (!is_static) f_.wildcard_imports.push_back(name);
        next += 2;
      } else if (!is_static) {
        const auto dot = name.rfind('.');
        f_.imports[dot == std::string::npos ? name : name.substr(dot + 1)] = name;
      }
      i = expect(next, ";");
    }
    while (i < toks_.size()) {
      if (is(i, ";")) {
        ++i;
        continue;
      }
      const auto start = i;
      Modifiers mods;
      i = parse_modifiers(i, mods);
      if (!at_type_keyword(i)) throw ParseFailure(line_at(i), "expected a type declaration");
      i = parse_type(i, start, mods, {}, {}, false);
    }
  }

 private:
  bool is(std::size_t i, std::string_view text) const { return i < toks_.size() && toks_[i].text == text; }
  bool is_ident(std::size_t i) const {
    return i < toks_.size() && toks_[i].kind == Tok::kIdent && !kKeywords.count(toks_[i].text);
  }
  std::size_t line_at(std::size_t i) const {
    if (toks_.empty()) return 0;
    return toks_[std::min(i, toks_.size() - 1)].line;
  }
  std::size_t expect(std::size_t i, std::string_view text) const {
    if (!is(i, text)) throw ParseFailure(line_at(i), "expected '" + std::string(text) + "'");
    return i + 1;
  }

  std::pair<std::string, std::size_t> qualified_name(std::size_t i) const {
    if (!(i < toks_.size() && toks_[i].kind == Tok::kIdent)) throw ParseFailure(line_at(i), "expected a name");
    std::string name = toks_[i].text;
    ++i;
    while (is(i, ".") && i + 1 < toks_.size() && toks_[i + 1].kind == Tok::kIdent) {
      name += "." + toks_[i + 1].text;
      i += 2;
    }
    return {name, i};
  }

  std::size_t skip_balanced(std::size_t i, std::string_view open, std::string_view close) const {
    int depth = 0;
    for (; i < toks_.size(); ++i) {
      if (toks_[i].text == open) {
        ++depth;
      } else if (toks_[i].text == close) {
        if (--depth == 0) return i + 1;
      }
    }
    throw ParseFailure(line_at(i), "unterminated '" + std::string(open) + "'");
  }

  std::size_t skip_annotations(std::size_t i) const {
    while (is(i, "@") && !is(i + 1, "interface")) {
      i = qualified_name(i + 1).second;
      if (is(i, "(")) i = skip_balanced(i, "(", ")");
    }
    return i;
  }

  std::size_t parse_modifiers(std::size_t i, Modifiers& mods) const {
    while (i < toks_.size()) {
      if (is(i, "@") && !is(i + 1, "interface")) {
        auto [name, next] = qualified_name(i + 1);
        if (name == "Override" || name == "java.lang.Override") mods.overrides = true;
        i = is(next, "(") ? skip_balanced(next, "(", ")") : next;
        continue;
      }
      if (is(i, "non") && is(i + 1, "-") && is(i + 2, "sealed")) {
        i += 3;
        continue;
      }
      if (toks_[i].kind != Tok::kIdent || !kModifiers.count(toks_[i].text)) break;
      // `default:` inside a switch never reaches here, but an annotation
      // member's `default` value does; it is handled by the caller.
      const auto& t = toks_[i].text;
      if (auto v = parse_visibility(t); v && t != "package") {
        mods.visibility = *v;
        mods.explicit_visibility = true;
      } else if (t == "static") {
        mods.is_static = true;
      } else if (t == "abstract") {
        mods.is_abstract = true;
      } else if (t == "default") {
        mods.is_default = true;
      }
      ++i;
    }
    return i;
  }

  bool at_type_keyword(std::size_t i) const {
    if (is(i, "class") || is(i, "interface") || is(i, "enum")) return true;
    if (is(i, "@") && is(i + 1, "interface")) return true;
    return is(i, "record") && is_ident(i + 1) && (is(i + 2, "(") || is(i + 2, "<"));
  }

  // Type parameter list starting at '<'; returns the index after '>'.
  std::size_t type_parameters(std::size_t i, std::set<std::string>& names) const {
    int depth = 0;
    for (; i < toks_.size(); ++i) {
      const auto& t = toks_[i].text;
      if (t == "<") {
        if (++depth == 1 && is_ident(i + 1)) names.insert(toks_[i + 1].text);
      } else if (t == ">") {
        if (--depth == 0) return i + 1;
      } else if (t == "," && depth == 1 && is_ident(i + 1)) {
        names.insert(toks_[i + 1].text);
      }
    }
    throw ParseFailure(line_at(i), "unterminated type parameters");
  }

 public:
  // Type reference text with generic arguments dropped, array suffixes kept.
  std::pair<std::string, std::size_t> type_ref(std::size_t i) const {
    i = skip_annotations(i);
    if (!(i < toks_.size() && toks_[i].kind == Tok::kIdent)) throw ParseFailure(line_at(i), "expected a type");
    std::string text = toks_[i].text;
    ++i;
    while (true) {
      if (is(i, "<")) i = skip_balanced(i, "<", ">");
      if (is(i, ".") && i + 1 < toks_.size() && toks_[i + 1].kind == Tok::kIdent) {
        text += "." + toks_[i + 1].text;
        i += 2;
        continue;
      }
      break;
    }
    while (true) {
      i = skip_annotations(i);
      if (is(i, "[") && is(i + 1, "]")) {
        text += "[]";
        i += 2;
      } else if (is(i, "...")) {
        text += "...";
        ++i;
      } else {
        break;
      }
    }
    return {text, i};
  }

 private:
  std::vector<std::string> type_list(std::size_t& i) const {
    std::vector<std::string> out;
    while (true) {
      auto [text, next] = type_ref(i);
      out.push_back(text);
      i = next;
      if (!is(i, ",")) break;
      ++i;
    }
    return out;
  }

  // Comma-separated parameters between '(' at `i` and its ')'.
  std::vector<RawParam> parameters(std::size_t& i) const {
    std::vector<RawParam> out;
    const auto close = skip_balanced(i, "(", ")") - 1;
    std::size_t k = i + 1;
    while (k < close) {
      Modifiers ignored;
      k = parse_modifiers(k, ignored);
      auto [type, next] = type_ref(k);
      k = next;
      if (is(k, "this")) {
        ++k;  // receiver parameter
      } else {
        if (!(k < close && toks_[k].kind == Tok::kIdent)) throw ParseFailure(line_at(k), "expected a parameter name");
        std::string name = toks_[k].text;
        ++k;
        while (is(k, "[") && is(k + 1, "]")) {
          type += "[]";
          k += 2;
        }
        out.push_back({name, type});
      }
      if (is(k, ",")) ++k;
      else if (k != close) throw ParseFailure(line_at(k), "malformed parameter list");
    }
    i = close + 1;
    return out;
  }

  // Skips an expression up to a top-level ',' or ';' (not consumed).
  std::size_t skip_expression(std::size_t i) const {
    while (i < toks_.size()) {
      const auto& t = toks_[i].text;
      if (t == "," || t == ";" || t == "}") return i;
      if (t == "(") {
        i = skip_balanced(i, "(", ")");
      } else if (t == "[") {
        i = skip_balanced(i, "[", "]");
      } else if (t == "{") {
        i = skip_balanced(i, "{", "}");
      } else if (t == "<" && i > 0 && (toks_[i - 1].text == "." || is_type_like(i - 1))) {
        auto end = generic_end(i);
        i = end ? *end : i + 1;
      } else {
        ++i;
      }
    }
    return i;
  }

  bool is_type_like(std::size_t i) const {
    return toks_[i].kind == Tok::kIdent && std::isupper(static_cast<unsigned char>(toks_[i].text[0]));
  }

 public:
  // End of a generic argument list at '<' if the tokens look like type
  // arguments; nullopt for a comparison.
  std::optional<std::size_t> generic_end(std::size_t i) const {
    int depth = 0;
    for (; i < toks_.size(); ++i) {
      const auto& tk = toks_[i];
      if (tk.text == "<") {
        ++depth;
      } else if (tk.text == ">") {
        if (--depth == 0) return i + 1;
      } else if (tk.kind == Tok::kIdent || tk.text == "." || tk.text == "," || tk.text == "?" ||
                 tk.text == "[" || tk.text == "]" || tk.text == "&" || tk.text == "@") {
        continue;
      } else {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

 private:
  // `enclosing` lists qualified names of the outer types, innermost first.
  std::size_t parse_type(std::size_t i, std::size_t start, const Modifiers& mods,
                         const std::vector<std::string>& enclosing, const std::set<std::string>& outer_params,
                         bool in_interface) {
    RawType raw;
    raw.decl.visibility = mods.explicit_visibility ? mods.visibility
                                                   : (in_interface ? Visibility::kPublic : Visibility::kPackage);
    raw.file = file_index_;
    raw.first_line = line_at(start);
    bool is_enum = false, is_record = false;
    if (is(i, "@")) {
      raw.decl.kind = TypeKind::kInterface;
      i += 2;
    } else {
      const auto& kw = toks_[i].text;
      raw.decl.kind = kw == "interface" ? TypeKind::kInterface : TypeKind::kClass;
      is_enum = kw == "enum";
      is_record = kw == "record";
      ++i;
    }
    if (!is_ident(i) && !(i < toks_.size() && toks_[i].kind == Tok::kIdent)) {
      throw ParseFailure(line_at(i), "expected a type name");
    }
    raw.simple = toks_[i].text;
    ++i;
    std::string prefix;
    if (!enclosing.empty()) {
      prefix = enclosing.front() + ".";
    } else if (!f_.package.empty()) {
      prefix = f_.package + ".";
    }
    raw.enclosing = enclosing;
    raw.type_params = outer_params;
    raw.decl.qualified_name = prefix + raw.simple;
    raw.decl.package_name = f_.package;
    raw.decl.source_file = f_.path;

    if (is(i, "<")) i = type_parameters(i, raw.type_params);
    std::vector<RawParam> components;
    if (is_record && is(i, "(")) components = parameters(i);
    while (i < toks_.size() && !is(i, "{")) {
      if (is(i, "extends")) {
        ++i;
        raw.decl.super_types = type_list(i);
      } else if (is(i, "implements")) {
        ++i;
        raw.decl.implemented_interfaces = type_list(i);
      } else if (is(i, "permits")) {
        ++i;
        type_list(i);
      } else {
        throw ParseFailure(line_at(i), "unexpected token '" + toks_[i].text + "' in type header");
      }
    }
    i = expect(i, "{");

    for (const auto& c : components) {
      raw.decl.fields.push_back({c.name, c.type, Visibility::kPrivate, false});
    }

    const auto slot = out_.size();
    out_.push_back(std::move(raw));
    // Nested declarations append to out_, so never hold a reference across them.
    auto self = [&]() -> RawType& { return out_[slot]; };

    if (is_enum) i = parse_enum_constants(i, self());

    while (i < toks_.size() && !is(i, "}")) {
      if (is(i, ";")) {
        ++i;
        continue;
      }
      const auto member_start = i;
      Modifiers m;
      i = parse_modifiers(i, m);
      if (at_type_keyword(i)) {
        std::vector<std::string> chain{self().decl.qualified_name};
        chain.insert(chain.end(), self().enclosing.begin(), self().enclosing.end());
        const auto params = self().type_params;
        i = parse_type(i, member_start, m, chain, params, self().decl.is_interface());
        continue;
      }
      if (is(i, "{")) {
        const auto end = skip_balanced(i, "{", "}");
        self().initializer_blocks.emplace_back(i + 1, end - 1);
        i = end;
        continue;
      }
      i = parse_member(i, member_start, m, self(), is_record, components);
    }
    i = expect(i, "}");
    self().last_line = line_at(i - 1);
    return i;
  }

  std::size_t parse_enum_constants(std::size_t i, RawType& raw) {
    while (i < toks_.size()) {
      i = skip_annotations(i);
      if (is(i, ";")) return i + 1;
      if (is(i, "}")) return i;
      if (!(i < toks_.size() && toks_[i].kind == Tok::kIdent)) throw ParseFailure(line_at(i), "expected an enum constant");
      raw.decl.fields.push_back({toks_[i].text, raw.simple, Visibility::kPublic, true});
      ++i;
      if (is(i, "(")) i = skip_balanced(i, "(", ")");
      if (is(i, "{")) i = skip_balanced(i, "{", "}");
      if (is(i, ",")) ++i;
    }
    return i;
  }

  std::size_t parse_member(std::size_t i, std::size_t start, const Modifiers& m, RawType& raw, bool is_record,
                           const std::vector<RawParam>& components) {
    const bool in_interface = raw.decl.is_interface();
    RawMethod method;
    if (is(i, "<")) i = type_parameters(i, method.type_params);

    auto finish_method = [&](std::size_t k, bool constructor) {
      while (is(k, "[") && is(k + 1, "]")) k += 2;
      if (is(k, "throws")) {
        ++k;
        type_list(k);
      }
      if (is(k, "default")) k = skip_expression(k + 1);
      auto& d = method.decl;
      d.is_constructor = constructor;
      d.is_static = m.is_static;
      d.overrides_super = m.overrides;
      d.visibility = m.explicit_visibility ? m.visibility
                                           : (in_interface ? Visibility::kPublic : Visibility::kPackage);
      for (const auto& p : method.params) d.param_types.push_back(p.type);
      method.first_line = line_at(start);
      if (is(k, "{")) {
        const auto end = skip_balanced(k, "{", "}");
        method.has_body = true;
        method.body_begin = k + 1;
        method.body_end = end - 1;
        k = end;
      } else {
        k = expect(k, ";");
      }
      method.last_line = line_at(k - 1);
      d.is_abstract = m.is_abstract || (in_interface && !method.has_body);
      raw.methods.push_back(std::move(method));
      return k;
    };

    if (i < toks_.size() && toks_[i].text == raw.simple && is(i + 1, "(")) {
      method.decl.name = raw.simple;
      std::size_t k = i + 1;
      method.params = parameters(k);
      return finish_method(k, true);
    }
    if (is_record && i < toks_.size() && toks_[i].text == raw.simple && is(i + 1, "{")) {
      method.decl.name = raw.simple;
      method.params = components;
      return finish_method(i + 1, true);
    }

    auto [type, k] = type_ref(i);
    if (!(k < toks_.size() && toks_[k].kind == Tok::kIdent)) throw ParseFailure(line_at(k), "expected a member name");
    std::string name = toks_[k].text;
    ++k;
    if (is(k, "(")) {
      method.decl.name = name;
      method.decl.return_type = type;
      method.params = parameters(k);
      return finish_method(k, false);
    }

    // Field declarators.
    while (true) {
      std::string declared = type;
      while (is(k, "[") && is(k + 1, "]")) {
        declared += "[]";
        k += 2;
      }
      FieldDecl fd;
      fd.name = name;
      fd.declared_type = declared;
      fd.visibility = m.explicit_visibility ? m.visibility
                                            : (in_interface ? Visibility::kPublic : Visibility::kPackage);
      fd.is_static = m.is_static || in_interface;
      raw.decl.fields.push_back(fd);
      if (is(k, "=")) k = skip_expression(k + 1);
      if (is(k, ",")) {
        ++k;
        if (!(k < toks_.size() && toks_[k].kind == Tok::kIdent)) throw ParseFailure(line_at(k), "expected a field name");
        name = toks_[k].text;
        ++k;
        continue;
      }
      return expect(k, ";");
    }
  }

  FileContext& f_;
  const std::vector<Token>& toks_;
  std::size_t file_index_;
  std::vector<RawType>& out_;
};

// ---------------------------------------------------------------------------
// Resolution and body analysis (pass 2)

class Resolver {
 public:
  Resolver(std::vector<RawType>& types, std::vector<FileContext>& files) : types_(types), files_(files) {
    for (std::size_t k = 0; k < types_.size(); ++k) by_name_.emplace(types_[k].decl.qualified_name, k);
  }

  bool declared(const std::string& name) const { return by_name_.count(name) > 0; }
  RawType* raw(const std::string& name) {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &types_[it->second];
  }

  // Returns the resolved text (array suffix preserved). Type variables and
  // primitives come back unchanged.
  std::string resolve(const std::string& text, const RawType& ctx, const std::set<std::string>& extra_params = {}) {
    const auto cut = std::min(text.find('['), text.find("..."));
    const std::string base = text.substr(0, cut);
    const std::string suffix = cut == std::string::npos ? "" : text.substr(cut);
    return resolve_base(base, ctx, extra_params) + suffix;
  }

  std::string resolve_base(const std::string& base, const RawType& ctx, const std::set<std::string>& extra_params) {
    if (base.empty() || is_primitive_type(base) || base == "void") return base;
    if (ctx.type_params.count(base) || extra_params.count(base)) return base;
    const auto& file = files_[ctx.file];
    const auto dot = base.find('.');
    if (dot != std::string::npos) {
      if (declared(base)) return base;
      const auto head = resolve_base(base.substr(0, dot), ctx, extra_params);
      const auto candidate = head + base.substr(dot);
      if (declared(candidate)) return candidate;
      if (!file.package.empty() && declared(file.package + "." + base)) return file.package + "." + base;
      return base;
    }
    std::vector<std::string> scopes{ctx.decl.qualified_name};
    scopes.insert(scopes.end(), ctx.enclosing.begin(), ctx.enclosing.end());
    for (const auto& s : scopes) {
      if (declared(s + "." + base)) return s + "." + base;
      const auto sd = s.rfind('.');
      if ((sd == std::string::npos ? s : s.substr(sd + 1)) == base) return s;
      // Member types inherited from declared supertypes.
      if (auto* r = raw(s)) {
        for (const auto& st : r->decl.super_types) {
          if (declared(st) && declared(st + "." + base)) return st + "." + base;
        }
      }
    }
    if (auto it = file.imports.find(base); it != file.imports.end()) return it->second;
    const auto local = file.package.empty() ? base : file.package + "." + base;
    if (declared(local)) return local;
    for (const auto& w : file.wildcard_imports) {
      if (declared(w + "." + base)) return w + "." + base;
    }
    return base;
  }

  bool is_type_variable(const std::string& name, const RawType& ctx, const std::set<std::string>& extra) const {
    return ctx.type_params.count(name) || extra.count(name);
  }

  std::vector<RawType>& types_;
  std::vector<FileContext>& files_;
  std::map<std::string, std::size_t> by_name_;
};

struct FieldBinding {
  std::string owner;  // declaring type
  std::string type;   // resolved declared type
};

class BodyAnalyzer {
 public:
  BodyAnalyzer(Resolver& resolver, std::set<std::string>& externals)
      : res_(resolver), externals_(externals) {}

  void analyze(RawType& type, RawMethod& method) {
    const auto& file = res_.files_[type.file];
    const auto& toks = file.tokens;
    auto& d = method.decl;

    // Line span, including a directly preceding comment block.
    std::size_t first = method.first_line;
    while (first > 1 && first - 1 <= file.kinds.size() && file.kinds[first - 2] == LineKind::kComment) --first;
    for (std::size_t l = first; l <= method.last_line && l <= file.kinds.size(); ++l) {
      switch (file.kinds[l - 1]) {
        case LineKind::kBlank: ++d.lines.blank; break;
        case LineKind::kComment: ++d.lines.comment; break;
        case LineKind::kCode: ++d.lines.code; break;
      }
    }
    if (!method.has_body) return;

    const auto b = method.body_begin, e = method.body_end;
    d.decision_count = count_decisions(toks, b, e);
    d.statement_count = count_statements(toks, b, e);
    d.halstead = halstead(toks, b, e);

    fields_ = field_bindings(type);
    vars_.clear();
    for (const auto& p : method.params) vars_[p.name] = res_.resolve(p.type, type, method.type_params);
    collect_locals(toks, b, e, type, method.type_params);

    std::set<MemberRef> accesses, calls;
    for (std::size_t k = b; k < e; ++k) {
      const auto& t = toks[k];
      const bool self_ref = t.text == "this" || t.text == "super";
      if (t.kind != Tok::kIdent || (kKeywords.count(t.text) && !self_ref)) continue;
      const bool prev_dot = k > b && toks[k - 1].text == ".";
      const bool call_next = k + 1 < e && toks[k + 1].text == "(";

      if (prev_dot) {
        if (k >= b + 2 && simple_receiver(toks, k - 2, b)) continue;  // handled with its receiver
        if (call_next) calls.insert({std::string(kUnresolved), t.text});
        continue;
      }
      if (k > b && toks[k - 1].text == "new") {
        std::string name = t.text;
        std::size_t j = k + 1;
        while (j + 1 < e && toks[j].text == "." && toks[j + 1].kind == Tok::kIdent) {
          name += "." + toks[j + 1].text;
          j += 2;
        }
        if (j < e && toks[j].text == "<") {
          while (j < e && toks[j].text != "(" && toks[j].text != "[") ++j;
        }
        if (j < e && toks[j].text == "(") {
          const auto owner = owner_name(res_.resolve(name, type, method.type_params), type, method.type_params);
          const auto dot = name.rfind('.');
          if (owner != kUnresolved) calls.insert({owner, dot == std::string::npos ? name : name.substr(dot + 1)});
        }
        k = j - 1;
        continue;
      }
      if (call_next) {
        if (t.text == "this") {
          calls.insert({type.decl.qualified_name, type.simple});
        } else if (t.text == "super") {
          if (auto sup = superclass_of(type)) calls.insert({*sup, simple_of(*sup)});
        } else {
          calls.insert({method_owner(type, t.text), t.text});
        }
        continue;
      }
      if (k + 2 < e && toks[k + 1].text == "." && toks[k + 2].kind == Tok::kIdent) {
        std::string owner = receiver_type(t.text, type, method.type_params, accesses);
        const auto& member = toks[k + 2].text;
        const bool member_call = k + 3 < e && toks[k + 3].text == "(";
        if (member_call) {
          calls.insert({owner, member});
        } else if (owner != kUnresolved) {
          if (res_.declared(owner)) {
            if (auto decl = declaring_type(owner, member)) accesses.insert({*decl, member});
          } else if (member != "class" && member != "length") {
            accesses.insert({owner, member});
          }
        }
        continue;
      }
      if (self_ref || vars_.count(t.text)) continue;
      if (auto it = fields_.find(t.text); it != fields_.end()) accesses.insert({it->second.owner, t.text});
    }

    for (const auto& a : accesses) note_external(a.owner);
    for (const auto& c : calls) note_external(c.owner);
    d.accessed_fields.assign(accesses.begin(), accesses.end());
    d.called_methods.assign(calls.begin(), calls.end());
  }

  static std::size_t count_decisions(const std::vector<Token>& toks, std::size_t b, std::size_t e) {
    std::size_t n = 0;
    for (std::size_t k = b; k < e; ++k) {
      const auto& t = toks[k];
      if (t.kind == Tok::kIdent) {
        n += kDecisionKeywords.count(t.text);
      } else if (t.kind == Tok::kPunct) {
        if (t.text == "&&" || t.text == "||") {
          ++n;
        } else if (t.text == "?") {
          const bool after_open = k > 0 && (toks[k - 1].text == "<" || toks[k - 1].text == ",");
          const bool before_close = k + 1 < toks.size() && (toks[k + 1].text == ">" || toks[k + 1].text == "," ||
                                                            toks[k + 1].text == "extends" ||
                                                            toks[k + 1].text == "super");
          if (!(after_open && before_close)) ++n;
        }
      }
    }
    return n;
  }

  static std::size_t count_statements(const std::vector<Token>& toks, std::size_t b, std::size_t e) {
    std::size_t n = 0;
    int parens = 0;
    for (std::size_t k = b; k < e; ++k) {
      const auto& t = toks[k];
      if (t.kind == Tok::kPunct) {
        if (t.text == "(") ++parens;
        else if (t.text == ")") --parens;
        else if (t.text == ";" && parens == 0) ++n;
      } else if (t.kind == Tok::kIdent && kStatementKeywords.count(t.text)) {
        ++n;
      }
    }
    return n;
  }

  static HalsteadCounts halstead(const std::vector<Token>& toks, std::size_t b, std::size_t e) {
    std::map<std::string, std::size_t> ops, opnds;
    for (std::size_t k = b; k < e; ++k) {
      const auto& t = toks[k];
      switch (t.kind) {
        case Tok::kPunct:
          if (t.text == ")" || t.text == "]" || t.text == "}") break;
          if (t.text == "(") ++ops["()"];
          else if (t.text == "[") ++ops["[]"];
          else if (t.text == "{") ++ops["{}"];
          else ++ops[t.text];
          break;
        case Tok::kIdent:
          if (kOperandKeywords.count(t.text)) ++opnds[t.text];
          else if (kOperatorKeywords.count(t.text)) ++ops[t.text];
          else if (!kKeywords.count(t.text)) ++opnds[t.text];
          break;
        default:
          ++opnds[t.text];
          break;
      }
    }
    HalsteadCounts h;
    h.distinct_operators = ops.size();
    h.distinct_operands = opnds.size();
    for (const auto& [_, c] : ops) h.total_operators += c;
    for (const auto& [_, c] : opnds) h.total_operands += c;
    return h;
  }

  std::map<std::string, FieldBinding> field_bindings(const RawType& type) {
    std::map<std::string, FieldBinding> out;
    auto add_chain = [&](const RawType* t) {
      std::set<std::string> seen;
      while (t && seen.insert(t->decl.qualified_name).second) {
        for (const auto& f : t->decl.fields) out.try_emplace(f.name, FieldBinding{t->decl.qualified_name, f.declared_type});
        auto sup = superclass_of(*t);
        t = sup ? res_.raw(*sup) : nullptr;
      }
    };
    add_chain(&type);
    for (const auto& e : type.enclosing) add_chain(res_.raw(e));
    return out;
  }

 private:
  std::optional<std::string> superclass_of(const RawType& t) const {
    if (t.decl.is_interface() || t.decl.super_types.empty()) return std::nullopt;
    return t.decl.super_types.front();
  }

  static std::string simple_of(const std::string& name) {
    const auto d = name.rfind('.');
    return d == std::string::npos ? name : name.substr(d + 1);
  }

  static bool simple_receiver(const std::vector<Token>& toks, std::size_t r, std::size_t b) {
    const auto& t = toks[r];
    if (t.kind != Tok::kIdent) return false;
    if (kKeywords.count(t.text) && t.text != "this" && t.text != "super") return false;
    if (r > b && (toks[r - 1].text == "." || toks[r - 1].text == "new")) return false;
    return true;
  }

  std::string owner_name(const std::string& resolved, const RawType& ctx, const std::set<std::string>& extra) const {
    const auto base = erase_type_arguments(resolved);
    if (base.empty() || is_primitive_type(base) || base == "void" || res_.is_type_variable(base, ctx, extra)) {
      return std::string(kUnresolved);
    }
    return base;
  }

  std::string receiver_type(const std::string& name, const RawType& type, const std::set<std::string>& extra,
                            std::set<MemberRef>& accesses) {
    if (name == "this") return type.decl.qualified_name;
    if (name == "super") {
      auto sup = superclass_of(type);
      return sup ? *sup : std::string(kUnresolved);
    }
    if (auto it = vars_.find(name); it != vars_.end()) return owner_name(it->second, type, extra);
    if (auto it = fields_.find(name); it != fields_.end()) {
      accesses.insert({it->second.owner, name});
      return owner_name(it->second.type, type, extra);
    }
    const auto resolved = res_.resolve(name, type, extra);
    if (res_.declared(resolved)) return resolved;
    if (std::isupper(static_cast<unsigned char>(name[0])) && !res_.is_type_variable(name, type, extra)) {
      return resolved;
    }
    return std::string(kUnresolved);
  }

  std::optional<std::string> declaring_type(const std::string& owner, const std::string& member) {
    std::set<std::string> seen;
    for (auto* t = res_.raw(owner); t && seen.insert(t->decl.qualified_name).second;) {
      for (const auto& f : t->decl.fields) {
        if (f.name == member) return t->decl.qualified_name;
      }
      auto sup = superclass_of(*t);
      t = sup ? res_.raw(*sup) : nullptr;
    }
    return std::nullopt;
  }

  // Unqualified call: own or inherited method, else an enclosing type's.
  std::string method_owner(const RawType& type, const std::string& name) {
    auto declares = [&](const RawType* start) {
      std::set<std::string> seen;
      for (auto* t = start; t && seen.insert(t->decl.qualified_name).second;) {
        for (const auto& m : t->methods) {
          if (m.decl.name == name) return true;
        }
        auto sup = superclass_of(*t);
        t = sup ? res_.raw(*sup) : nullptr;
      }
      return false;
    };
    if (declares(&type)) return type.decl.qualified_name;
    for (const auto& e : type.enclosing) {
      if (declares(res_.raw(e))) return e;
    }
    return type.decl.qualified_name;
  }

  void collect_locals(const std::vector<Token>& toks, std::size_t b, std::size_t e, const RawType& type,
                      const std::set<std::string>& extra) {
    static const std::unordered_set<std::string> terminators = {"=", ";", ",", ":", ")", "&&", "||"};
    static const std::unordered_set<std::string> primitives = {"int",   "long",  "short",  "byte", "char",
                                                               "float", "double", "boolean", "var"};
    for (std::size_t j = b + 1; j + 1 < e; ++j) {
      const auto& t = toks[j];
      if (t.kind != Tok::kIdent || kKeywords.count(t.text) || !terminators.count(toks[j + 1].text)) continue;
      std::size_t p = j - 1;
      // Walk back over the type: dims, generic arguments, dotted name.
      while (p > b && toks[p].text == "]" && toks[p - 1].text == "[") p -= 2;
      if (toks[p].text == ">") {
        int depth = 0;
        std::size_t q = p;
        bool found = false;
        for (;; --q) {
          if (toks[q].text == ">") ++depth;
          else if (toks[q].text == "<" && --depth == 0) {
            found = true;
            break;
          }
          if (q == b) break;
        }
        if (!found || q == b) continue;
        p = q - 1;
      }
      const auto& tt = toks[p];
      if (tt.kind != Tok::kIdent) continue;
      if (kKeywords.count(tt.text) && !primitives.count(tt.text)) continue;
      std::size_t start = p;
      while (start >= b + 2 && toks[start - 1].text == "." && toks[start - 2].kind == Tok::kIdent) start -= 2;
      std::string text;
      for (std::size_t q = start; q <= p; ++q) text += toks[q].text;
      if (text == "var") {
        vars_[t.text] = std::string(kUnresolved);
        continue;
      }
      vars_[t.text] = res_.resolve(text, type, extra);
    }
  }

  void note_external(const std::string& owner) {
    if (owner != kUnresolved && !res_.declared(owner)) externals_.insert(owner);
  }

  Resolver& res_;
  std::set<std::string>& externals_;
  std::map<std::string, FieldBinding> fields_;
  std::map<std::string, std::string> vars_;
};

void note_type(const std::string& resolved, const RawType& ctx, const std::set<std::string>& extra, Resolver& res,
               std::set<std::string>& externals) {
  const auto base = erase_type_arguments(resolved);
  if (base.empty() || base == "void" || is_primitive_type(base) || res.is_type_variable(base, ctx, extra)) return;
  if (!res.declared(base)) externals.insert(base);
}

}  // namespace

ParseResult parse_java_sources(std::span<const SourceFile> sources) {
  ParseResult result;
  std::vector<const SourceFile*> ordered;
  for (const auto& s : sources) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](const SourceFile* a, const SourceFile* b) { return a->path < b->path; });

  std::vector<FileContext> files;
  std::vector<RawType> types;
  std::vector<FileLineCount> line_counts;
  for (const auto* src : ordered) {
    FileContext ctx;
    ctx.path = src->path;
    ctx.kinds = classify_lines(src->text, java_language_config());
    line_counts.push_back({src->path, "Java", tally(ctx.kinds)});

    auto lexed = lex(src->text);
    if (lexed.brace_balance != 0 || lexed.first_unbalanced_line != 0) {
      const auto line = lexed.first_unbalanced_line ? lexed.first_unbalanced_line : 0;
      result.diagnostics.push_back({Diagnostic::Severity::kError, src->path, line, "unbalanced braces; file skipped"});
      continue;
    }
    ctx.tokens = std::move(lexed.tokens);
    const auto index = files.size();
    files.push_back(std::move(ctx));
    std::vector<RawType> found;
    try {
      FileParser parser(files.back(), index, found);
      parser.parse();
    } catch (const ParseFailure& e) {
      result.diagnostics.push_back(
          {Diagnostic::Severity::kError, src->path, e.line(), std::string(e.what()) + "; file skipped"});
      continue;
    }
    for (auto& t : found) types.push_back(std::move(t));
  }

  Resolver resolver(types, files);
  std::set<std::string> externals;
  for (auto& t : types) {
    auto& d = t.decl;
    for (auto& s : d.super_types) {
      s = erase_type_arguments(resolver.resolve(s, t));
      note_type(s, t, {}, resolver, externals);
    }
    for (auto& s : d.implemented_interfaces) {
      s = erase_type_arguments(resolver.resolve(s, t));
      note_type(s, t, {}, resolver, externals);
    }
    for (auto& f : d.fields) {
      f.declared_type = resolver.resolve(f.declared_type, t);
      note_type(f.declared_type, t, {}, resolver, externals);
    }
    for (auto& m : t.methods) {
      for (auto& p : m.params) {
        p.type = resolver.resolve(p.type, t, m.type_params);
        note_type(p.type, t, m.type_params, resolver, externals);
      }
      m.decl.param_types.clear();
      for (const auto& p : m.params) m.decl.param_types.push_back(p.type);
      if (!m.decl.return_type.empty()) {
        m.decl.return_type = resolver.resolve(m.decl.return_type, t, m.type_params);
        note_type(m.decl.return_type, t, m.type_params, resolver, externals);
      }
    }
  }

  BodyAnalyzer analyzer(resolver, externals);
  for (auto& t : types) {
    const auto& file = files[t.file];
    for (auto& m : t.methods) analyzer.analyze(t, m);
    for (const auto& [b, e] : t.initializer_blocks) {
      t.decl.initializer_statements += BodyAnalyzer::count_statements(file.tokens, b, e);
    }
    std::size_t first = t.first_line;
    while (first > 1 && file.kinds[first - 2] == LineKind::kComment) --first;
    t.decl.total_lines = t.last_line >= first ? t.last_line - first + 1 : 0;
    for (std::size_t l = first; l <= t.last_line && l <= file.kinds.size(); ++l) {
      t.decl.comment_lines += file.kinds[l - 1] == LineKind::kComment ? 1 : 0;
    }
    for (auto& m : t.methods) t.decl.methods.push_back(std::move(m.decl));
  }

  std::vector<TypeDecl> decls;
  decls.reserve(types.size());
  for (auto& t : types) decls.push_back(std::move(t.decl));
  if (decls.empty()) {
    result.diagnostics.push_back({Diagnostic::Severity::kWarning, "", 0, "no types found"});
  }
  result.model = ClassModel(std::move(decls), std::move(externals), std::move(line_counts));
  return result;
}

ParseResult parse_java_tree(std::span<const fs::path> roots) {
  std::vector<SourceFile> sources;
  std::vector<Diagnostic> unreadable;
  for (const auto& root : roots) {
    std::vector<std::pair<std::string, fs::path>> found;
    std::error_code ec;
    if (fs::is_regular_file(root, ec)) {
      found.emplace_back(root.generic_string(), root);
    } else if (fs::is_directory(root, ec)) {
      for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
           it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        const auto name = it->path().filename().string();
        if (!name.empty() && name[0] == '.') {
          if (it->is_directory()) it.disable_recursion_pending();
          continue;
        }
        if (it->is_regular_file() && it->path().extension() == ".java") {
          found.emplace_back(it->path().lexically_relative(root).generic_string(), it->path());
        }
      }
    } else {
      unreadable.push_back({Diagnostic::Severity::kError, root.generic_string(), 0, "path not found"});
    }
    for (const auto& [display, path] : found) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        unreadable.push_back({Diagnostic::Severity::kError, display, 0, "unreadable file"});
        continue;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      sources.push_back({display, ss.str()});
    }
  }
  auto result = parse_java_sources(sources);
  result.diagnostics.insert(result.diagnostics.begin(), unreadable.begin(), unreadable.end());
  return result;
}

}  // namespace qualimeter

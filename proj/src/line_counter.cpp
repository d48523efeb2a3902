#include <algorithm>
#include <fstream>
#include <sstream>

#include "qualimeter/ingest.hpp"

namespace qualimeter {

namespace fs = std::filesystem;

namespace {

LanguageCommentConfig c_like(std::string language, std::vector<std::string> extensions) {
  return {std::move(language), std::move(extensions), {"//"}, {{"/*", "*/"}}, "\"'"};
}

LanguageCommentConfig hash_comment(std::string language, std::vector<std::string> extensions) {
  return {std::move(language), std::move(extensions), {"#"}, {}, "\"'"};
}

const LanguageCommentConfig kUnknown{"unknown", {}, {}, {}, ""};

bool starts_with_at(std::string_view text, std::size_t pos, std::string_view token) {
  return !token.empty() && text.compare(pos, token.size(), token) == 0;
}

const LanguageCommentConfig& config_for(const fs::path& file, const std::vector<LanguageCommentConfig>& configs) {
  const auto name = file.filename().string();
  const auto ext = file.extension().string();
  for (const auto& c : configs) {
    for (const auto& e : c.extensions) {
      if (e == name || (!ext.empty() && e == ext)) return c;
    }
  }
  return kUnknown;
}

bool looks_binary(const std::string& text) {
  return text.find('\0', 0) < std::min<std::size_t>(text.size(), 8192);
}

void collect_files(const fs::path& root, std::vector<std::pair<std::string, fs::path>>& out) {
  std::error_code ec;
  if (fs::is_regular_file(root, ec)) {
    out.emplace_back(root.generic_string(), root);
    return;
  }
  if (!fs::is_directory(root, ec)) return;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const auto fname = it->path().filename().string();
    if (!fname.empty() && fname[0] == '.') {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file()) out.emplace_back(it->path().lexically_relative(root).generic_string(), it->path());
  }
}

}  // namespace

void validate(const LanguageCommentConfig& config) {
  if (config.language.empty()) throw std::invalid_argument("language config without a language tag");
  for (const auto& p : config.line_comments) {
    if (p.empty()) throw std::invalid_argument(config.language + ": empty line-comment prefix");
  }
  for (const auto& [open, close] : config.block_comments) {
    if (open.empty() || close.empty()) throw std::invalid_argument(config.language + ": unpaired block delimiter");
  }
}

std::vector<LanguageCommentConfig> default_language_configs() {
  return {
      c_like("Java", {".java"}),
      c_like("C", {".c"}),
      c_like("C/C++ Header", {".h", ".hpp", ".hh", ".hxx"}),
      c_like("C++", {".cpp", ".cc", ".cxx", ".c++"}),
      c_like("C#", {".cs"}),
      c_like("JavaScript", {".js", ".mjs"}),
      c_like("TypeScript", {".ts"}),
      c_like("Rust", {".rs"}),
      c_like("Go", {".go"}),
      c_like("Lucid", {".ipl", ".gipl"}),
      {"CSS", {".css"}, {}, {{"/*", "*/"}}, "\"'"},
      hash_comment("Perl", {".pl", ".pm"}),
      hash_comment("Python", {".py"}),
      hash_comment("Bourne Shell", {".sh"}),
      hash_comment("make", {"Makefile", "makefile", "GNUmakefile", ".mk", ".mak"}),
      hash_comment("CMake", {"CMakeLists.txt", ".cmake"}),
      hash_comment("YAML", {".yml", ".yaml"}),
      {"XML", {".xml", ".xsd"}, {}, {{"<!--", "-->"}}, ""},
      {"HTML", {".html", ".htm"}, {}, {{"<!--", "-->"}}, ""},
      {"SQL", {".sql"}, {"--"}, {{"/*", "*/"}}, "'"},
  };
}

const LanguageCommentConfig& java_language_config() {
  static const LanguageCommentConfig java = c_like("Java", {".java"});
  return java;
}

std::vector<LineKind> classify_lines(std::string_view text, const LanguageCommentConfig& config) {
  std::vector<LineKind> kinds;
  if (text.empty()) return kinds;

  const std::pair<std::string, std::string>* block = nullptr;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);

    bool has_code = false, has_comment = block != nullptr, blank = true;
    char in_string = 0;
    for (std::size_t i = 0; i < line.size();) {
      const char c = line[i];
      if (c != ' ' && c != '\t' && c != '\r' && c != '\f' && c != '\v') blank = false;
      if (block) {
        if (starts_with_at(line, i, block->second)) {
          i += block->second.size();
          block = nullptr;
        } else {
          ++i;
        }
        continue;
      }
      if (in_string) {
        has_code = true;
        if (c == '\\') {
          i += 2;
          continue;
        }
        if (c == in_string) in_string = 0;
        ++i;
        continue;
      }
      bool consumed = false;
      for (const auto& p : config.line_comments) {
        if (starts_with_at(line, i, p)) {
          has_comment = true;
          i = line.size();
          consumed = true;
          break;
        }
      }
      if (consumed) continue;
      for (const auto& b : config.block_comments) {
        if (starts_with_at(line, i, b.first)) {
          has_comment = true;
          block = &b;
          i += b.first.size();
          consumed = true;
          break;
        }
      }
      if (consumed) continue;
      if (config.string_delimiters.find(c) != std::string::npos) {
        in_string = c;
        has_code = true;
      } else if (c != ' ' && c != '\t' && c != '\r' && c != '\f' && c != '\v') {
        has_code = true;
      }
      ++i;
    }

    if (blank) {
      kinds.push_back(LineKind::kBlank);
    } else if (has_code) {
      kinds.push_back(LineKind::kCode);
    } else {
      kinds.push_back(has_comment ? LineKind::kComment : LineKind::kCode);
    }
    pos = eol + 1;
  }
  return kinds;
}

LineCounts tally(std::span<const LineKind> kinds) {
  LineCounts c;
  for (auto k : kinds) {
    switch (k) {
      case LineKind::kBlank: ++c.blank; break;
      case LineKind::kComment: ++c.comment; break;
      case LineKind::kCode: ++c.code; break;
    }
  }
  return c;
}

LineCensus count_lines(std::span<const fs::path> roots, const std::vector<LanguageCommentConfig>& configs) {
  for (const auto& c : configs) validate(c);
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& r : roots) collect_files(r, files);
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  LineCensus census;
  for (const auto& [display, path] : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto text = ss.str();
    if (looks_binary(text)) continue;
    const auto& config = config_for(path, configs);
    const auto kinds = classify_lines(text, config);
    FileLineCount entry{display, config.language, tally(kinds)};
    auto& totals = census.by_language[entry.language];
    ++totals.files;
    totals.lines.code += entry.lines.code;
    totals.lines.comment += entry.lines.comment;
    totals.lines.blank += entry.lines.blank;
    census.files.push_back(std::move(entry));
  }
  return census;
}

}  // namespace qualimeter

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qualimeter/model.hpp"

namespace qualimeter {

// ---------------------------------------------------------------------------
// Line counting

struct LanguageCommentConfig {
  std::string language;
  // ".java" style suffixes, or exact file names such as "Makefile".
  std::vector<std::string> extensions;
  std::vector<std::string> line_comments;
  std::vector<std::pair<std::string, std::string>> block_comments;
  // Characters opening single-line string literals; comment markers inside
  // them are ignored.
  std::string string_delimiters;
};

// Throws std::invalid_argument on empty or unpaired delimiters.
void validate(const LanguageCommentConfig& config);
std::vector<LanguageCommentConfig> default_language_configs();
const LanguageCommentConfig& java_language_config();

enum class LineKind { kBlank, kComment, kCode };

// One entry per physical line. Whitespace-only lines are blank, lines with
// any non-comment text are code, the rest are comment.
std::vector<LineKind> classify_lines(std::string_view text, const LanguageCommentConfig& config);
LineCounts tally(std::span<const LineKind> kinds);

struct LanguageTotals {
  std::size_t files = 0;
  LineCounts lines;
};

struct LineCensus {
  std::vector<FileLineCount> files;  // sorted by path
  std::map<std::string, LanguageTotals> by_language;
};

// Files with an unrecognised extension land under language "unknown" with
// every non-blank line counted as code. Hidden entries and binary files are
// skipped.
LineCensus count_lines(std::span<const std::filesystem::path> roots,
                       const std::vector<LanguageCommentConfig>& configs = default_language_configs());

// ---------------------------------------------------------------------------
// Java extraction

struct Diagnostic {
  enum class Severity { kWarning, kError };
  Severity severity = Severity::kWarning;
  std::string path;
  std::size_t line = 0;
  std::string message;

  std::string describe() const;
};

struct SourceFile {
  std::string path;
  std::string text;
};

struct ParseResult {
  ClassModel model;
  std::vector<Diagnostic> diagnostics;
};

// Shallow lexical extraction. Files with unbalanced braces are skipped with
// an error diagnostic; a tree without any type yields a warning.
ParseResult parse_java_sources(std::span<const SourceFile> files);
// Reads every *.java file below the roots. Unreadable files become error
// diagnostics.
ParseResult parse_java_tree(std::span<const std::filesystem::path> roots);

// ---------------------------------------------------------------------------
// Interchange format

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

ClassModel load_interchange(std::string_view json_text);
ClassModel load_interchange_file(const std::filesystem::path& file);
std::string save_interchange(const ClassModel& model);
void save_interchange_file(const ClassModel& model, const std::filesystem::path& file);

}  // namespace qualimeter

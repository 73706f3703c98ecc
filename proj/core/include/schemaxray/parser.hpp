#pragma once

#include <string>
#include <vector>

#include "schemaxray/code_model.hpp"
#include "schemaxray/diagnostics.hpp"

namespace sx {

enum class ParseMode { Strict, Lenient };

// Parses one source file into a script CodeContainer. Node ids are assigned
// in pre-order using `file_index` as the prefix.
//
// Strict mode throws SyntaxError on any unsupported or malformed construct.
// Lenient mode replaces unsupported statements with an opaque ExpressionStmt
// and records a warning; only unbalanced delimiters still throw.
CodeContainer parse_source(const std::string& source, const std::string& path,
                           ParseMode mode, DiagnosticList& diags,
                           std::uint32_t file_index = 0);

// In-memory project: (relative path, source text) pairs.
struct SourceFile {
  std::string path;
  std::string text;
};

// Builds a CodeModel from in-memory sources. Files are processed in
// lexicographic path order; a directory Container tree mirrors the paths.
CodeModel inject_sources(std::vector<SourceFile> files, ParseMode mode,
                         DiagnosticList& diags);

// Reads all files matching the include globs (default "**/*.js") under
// root_path and injects them. Throws IoError when root_path is missing or a
// file is unreadable; in strict mode per-file syntax errors are aggregated
// into `diags` and rethrown as one SyntaxError after all files were tried.
CodeModel inject_project(const std::string& root_path,
                         const std::vector<std::string>& include,
                         ParseMode mode, DiagnosticList& diags);

// Simple glob matching: '*' within one path segment, '**' across segments.
bool glob_match(const std::string& pattern, const std::string& path);

}  // namespace sx

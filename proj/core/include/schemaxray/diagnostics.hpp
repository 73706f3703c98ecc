#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sx {

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string code;     // e.g. "syntax", "profile", "reference"
  std::string message;
  std::string file;
  int line = 0;
  int column = 0;

  std::string render() const {
    std::string out = severity == Severity::Error ? "error" : "warning";
    out += "[" + code + "]";
    if (!file.empty()) {
      out += " " + file;
      if (line > 0) out += ":" + std::to_string(line) + ":" + std::to_string(column);
    }
    out += ": " + message;
    return out;
  }
};

using DiagnosticList = std::vector<Diagnostic>;

inline bool has_errors(const DiagnosticList& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

// Base for all analysis errors. Subclasses mirror the failure modes of the
// pipeline stages so callers can react per stage.
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class SyntaxError : public AnalysisError {
 public:
  SyntaxError(const std::string& message, std::string file, int line, int column)
      : AnalysisError("syntax", file + ":" + std::to_string(line) + ":" +
                                    std::to_string(column) + ": " + message),
        file_(std::move(file)), line_(line), column_(column) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_;
  int column_;
};

class IoError : public AnalysisError {
 public:
  explicit IoError(const std::string& message) : AnalysisError("io", message) {}
};

class ModelError : public AnalysisError {
 public:
  explicit ModelError(const std::string& message) : AnalysisError("model", message) {}
};

class ProfileError : public AnalysisError {
 public:
  explicit ProfileError(const std::string& message) : AnalysisError("profile", message) {}
};

class MappingError : public AnalysisError {
 public:
  explicit MappingError(const std::string& message) : AnalysisError("mapping", message) {}
};

// Malformed serialized model; carries the JSON path of the offending element.
class FormatError : public AnalysisError {
 public:
  FormatError(const std::string& message, std::string path)
      : AnalysisError("format", message + " (at " + path + ")"), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class SpecError : public AnalysisError {
 public:
  explicit SpecError(const std::string& message) : AnalysisError("spec", message) {}
};

class PlanStaleError : public AnalysisError {
 public:
  explicit PlanStaleError(const std::string& message) : AnalysisError("plan-stale", message) {}
};

class RewriteError : public AnalysisError {
 public:
  explicit RewriteError(const std::string& message) : AnalysisError("rewrite", message) {}
};

}  // namespace sx

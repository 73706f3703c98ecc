#pragma once

#include <string>
#include <vector>

#include "schemaxray/api_profile.hpp"
#include "schemaxray/cfg.hpp"
#include "schemaxray/dos.hpp"
#include "schemaxray/parser.hpp"
#include "schemaxray/refactor.hpp"
#include "schemaxray/uschema.hpp"

namespace sx {

struct AnalysisOptions {
  ParseMode mode = ParseMode::Strict;
  ApiProfile profile = default_mongodb_profile();
  ExtractOptions extract;
  std::vector<std::string> include;  // glob patterns; default **/*.js
  std::string schema_name = "app";
};

// One full pipeline run: Code model -> Control Flow model -> DOS model ->
// U-Schema, over an on-disk project or in-memory sources.
struct AnalysisResult {
  CodeModel code;
  ControlFlowModel cfg;
  DOSModel dos;
  USchemaModel schema;
  DiagnosticList diagnostics;
};

AnalysisResult analyze_project(const std::string& root_path, const AnalysisOptions& options);
AnalysisResult analyze_sources(std::vector<SourceFile> files, const AnalysisOptions& options);

}  // namespace sx

#include "schemaxray/analysis.hpp"

#include "schemaxray/type_evidence.hpp"

namespace sx {

namespace {

AnalysisResult run_pipeline(CodeModel code, DiagnosticList diags,
                            const AnalysisOptions& options) {
  AnalysisResult result;
  result.code = std::move(code);
  result.diagnostics = std::move(diags);
  infer_local_types(result.code, result.diagnostics);
  result.cfg = build_cfg(result.code);
  result.dos = extract_dos(result.cfg, result.code, options.profile, options.extract);
  result.diagnostics.insert(result.diagnostics.end(), result.dos.diagnostics.begin(),
                            result.dos.diagnostics.end());
  result.schema = to_uschema(result.dos, options.schema_name);
  return result;
}

}  // namespace

AnalysisResult analyze_project(const std::string& root_path,
                               const AnalysisOptions& options) {
  DiagnosticList diags;
  CodeModel code = inject_project(root_path, options.include, options.mode, diags);
  return run_pipeline(std::move(code), std::move(diags), options);
}

AnalysisResult analyze_sources(std::vector<SourceFile> files,
                               const AnalysisOptions& options) {
  DiagnosticList diags;
  CodeModel code = inject_sources(std::move(files), options.mode, diags);
  return run_pipeline(std::move(code), std::move(diags), options);
}

}  // namespace sx

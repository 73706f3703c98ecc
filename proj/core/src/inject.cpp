#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "schemaxray/parser.hpp"

namespace fs = std::filesystem;

namespace sx {

namespace {

bool glob_match_impl(const std::string& pat, std::size_t pi,
                     const std::string& str, std::size_t si) {
  while (pi < pat.size()) {
    if (pat.compare(pi, 3, "**/") == 0 || (pat.compare(pi, 2, "**") == 0 && pi + 2 == pat.size())) {
      std::size_t skip = pat.compare(pi, 3, "**/") == 0 ? 3 : 2;
      // '**' matches any number of path segments, including none.
      for (std::size_t k = si; k <= str.size(); ++k) {
        if (glob_match_impl(pat, pi + skip, str, k)) return true;
        // advance to the next segment boundary
        while (k < str.size() && str[k] != '/') ++k;
      }
      return false;
    }
    if (si >= str.size()) return false;
    char p = pat[pi];
    if (p == '*') {
      for (std::size_t k = si; k <= str.size(); ++k) {
        if (glob_match_impl(pat, pi + 1, str, k)) return true;
        if (k < str.size() && str[k] == '/') break;  // '*' stays in one segment
      }
      return false;
    }
    if (p != str[si]) return false;
    ++pi;
    ++si;
  }
  return si == str.size();
}

Container* ensure_directory(Container& root, const std::string& rel_dir) {
  if (rel_dir.empty()) return &root;
  Container* current = &root;
  std::stringstream ss(rel_dir);
  std::string part;
  std::string combined;
  while (std::getline(ss, part, '/')) {
    if (part.empty()) continue;
    combined = combined.empty() ? part : combined + "/" + part;
    Container* found = nullptr;
    for (auto& child : current->children) {
      if (child.kind == ContainerKind::Directory && child.path == combined) {
        found = &child;
        break;
      }
    }
    if (!found) {
      Container dir;
      dir.kind = ContainerKind::Directory;
      dir.path = combined;
      current->children.push_back(std::move(dir));
      found = &current->children.back();
    }
    current = found;
  }
  return current;
}

}  // namespace

bool glob_match(const std::string& pattern, const std::string& path) {
  return glob_match_impl(pattern, 0, path, 0);
}

CodeModel inject_sources(std::vector<SourceFile> files, ParseMode mode,
                         DiagnosticList& diags) {
  std::sort(files.begin(), files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });

  CodeModel model;
  Container root;
  root.kind = ContainerKind::Directory;
  root.path = "";

  std::vector<SyntaxError> errors;
  std::uint32_t file_index = 0;
  for (auto& file : files) {
    Container file_container;
    file_container.kind = ContainerKind::File;
    file_container.path = file.path;
    file_container.file_index = file_index;

    try {
      file_container.code_containers.push_back(
          parse_source(file.text, file.path, mode, diags, file_index));
    } catch (const SyntaxError& err) {
      Diagnostic d;
      d.severity = Severity::Error;
      d.code = "syntax";
      d.message = err.what();
      d.file = err.file();
      d.line = err.line();
      d.column = err.column();
      diags.push_back(std::move(d));
      errors.push_back(err);
    }

    model.sources.push_back(std::move(file.text));
    model.file_paths.push_back(file.path);

    std::string dir = file.path.find('/') != std::string::npos
                          ? file.path.substr(0, file.path.rfind('/'))
                          : "";
    ensure_directory(root, dir)->children.push_back(std::move(file_container));
    ++file_index;
  }

  if (!errors.empty()) throw errors.front();

  model.containers.push_back(std::move(root));
  model.globals = collect_globals(model);
  return model;
}

CodeModel inject_project(const std::string& root_path,
                         const std::vector<std::string>& include,
                         ParseMode mode, DiagnosticList& diags) {
  fs::path root(root_path);
  std::error_code ec;
  if (!fs::exists(root, ec) || !fs::is_directory(root, ec))
    throw IoError("project root does not exist: " + root_path);

  std::vector<std::string> patterns = include;
  if (patterns.empty()) patterns.push_back("**/*.js");

  std::vector<SourceFile> files;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw IoError("cannot traverse " + root_path + ": " + ec.message());
    if (!it->is_regular_file()) continue;
    std::string rel = fs::relative(it->path(), root).generic_string();
    bool matched = false;
    for (const auto& pat : patterns) {
      if (glob_match(pat, rel)) {
        matched = true;
        break;
      }
    }
    if (!matched) continue;

    std::ifstream in(it->path(), std::ios::binary);
    if (!in) throw IoError("cannot read file: " + it->path().string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    files.push_back({rel, buffer.str()});
  }

  return inject_sources(std::move(files), mode, diags);
}

}  // namespace sx

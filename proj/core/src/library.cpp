#include "gforge/library.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gforge/parser.hpp"

namespace gforge {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Library load_library(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw Error(ErrorCode::IoError,
                "construct library '" + dir.string() + "' is not a directory");

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".gcon")
      files.push_back(entry.path());
  }
  if (ec)
    throw Error(ErrorCode::IoError,
                "cannot list '" + dir.string() + "': " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });

  Library library;
  std::vector<std::string> problems;
  ErrorCode first_code = ErrorCode::ParseError;
  auto complain = [&](ErrorCode code, const std::string& message) {
    if (problems.empty()) first_code = code;
    problems.push_back(message);
  };

  for (const auto& file : files) {
    try {
      Construct construct = parse_construct(read_file(file), file.string());
      construct.provenance = file.filename().string();
      if (!construct.key) {
        complain(ErrorCode::MissingKey,
                 file.string() + ": construct '" + construct.name +
                     "' has no constraint key");
        continue;
      }
      library.constructs.push_back(std::move(construct));
    } catch (const Error& e) {
      complain(e.code(), e.diagnostic());
    }
  }

  for (std::size_t i = 0; i < library.constructs.size(); ++i) {
    const auto& key = *library.constructs[i].key;
    if (key.is_wildcard()) continue;  // wildcards may coexist
    for (std::size_t j = i + 1; j < library.constructs.size(); ++j) {
      const auto& other = *library.constructs[j].key;
      if (key == other)
        complain(ErrorCode::DuplicateKey,
                 "constructs '" + library.constructs[i].name + "' (" +
                     library.constructs[i].provenance + ") and '" +
                     library.constructs[j].name + "' (" +
                     library.constructs[j].provenance +
                     ") share the key " + key.to_string());
    }
  }

  if (!problems.empty()) {
    std::string message = "construct library '" + dir.string() + "' failed to load:";
    for (const auto& problem : problems) message += "\n  " + problem;
    throw Error(first_code, message);
  }
  return library;
}

const Construct* lookup(const Library& library,
                        const ConstraintAnnotation& annotation) {
  const Construct* wildcard = nullptr;
  for (const auto& construct : library.constructs) {
    if (!construct.key->matches(annotation)) continue;
    if (!construct.key->is_wildcard()) return &construct;
    if (!wildcard) wildcard = &construct;
  }
  return wildcard;
}

}  // namespace gforge

#include "drivebound/synth/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "drivebound/common/error.hpp"

namespace drivebound::synth {

namespace fs = std::filesystem;

void save_corpus(std::span<const stl::Trace> traces, const nlohmann::json& metadata,
                 const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "metadata.json");
    if (!out) throw IoError("cannot write metadata.json under '" + dir + "'");
    out << metadata.dump(2) << "\n";
  }
  char name[32];
  for (std::size_t i = 0; i < traces.size(); ++i) {
    std::snprintf(name, sizeof(name), "trace_%05zu.csv", i + 1);
    stl::write_trace_csv(traces[i], (fs::path(dir) / name).string());
  }
}

Corpus load_corpus(const std::string& dir) {
  fs::path root(dir);
  if (!fs::exists(root)) throw MissingInputError("corpus directory '" + dir + "' does not exist");
  fs::path meta_path = root / "metadata.json";
  if (!fs::exists(meta_path)) throw MissingInputError("missing metadata.json in '" + dir + "'");

  Corpus corpus;
  {
    std::ifstream in(meta_path);
    try {
      in >> corpus.metadata;
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed metadata.json in '" + dir + "': " + e.what());
    }
  }
  std::optional<stl::TraceLabel> label;
  if (corpus.metadata.contains("label")) {
    label = stl::label_from_text(corpus.metadata["label"].get<std::string>());
    if (!label) throw IoError("metadata.json has unknown label in '" + dir + "'");
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("trace_", 0) == 0 && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    stl::Trace tr = stl::read_trace_csv(f.string());
    tr.label = label;
    corpus.traces.push_back(std::move(tr));
  }
  if (corpus.traces.empty()) throw IoError("corpus '" + dir + "' contains no traces");
  return corpus;
}

}  // namespace drivebound::synth

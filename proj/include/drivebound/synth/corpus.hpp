#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drivebound/stl/trace.hpp"

namespace drivebound::synth {

struct Corpus {
  std::vector<stl::Trace> traces;
  nlohmann::json metadata;
};

// Directory layout: <dir>/metadata.json plus trace_00001.csv, trace_00002.csv, ...
// metadata["label"] ("human" | "non-human") is applied to every loaded trace.
void save_corpus(std::span<const stl::Trace> traces, const nlohmann::json& metadata,
                 const std::string& dir);
Corpus load_corpus(const std::string& dir);

}  // namespace drivebound::synth

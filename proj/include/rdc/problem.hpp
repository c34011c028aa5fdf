#pragma once

// Problem files: a JSON object of the form
//
//   {"prior1": 0.5, "p_x1": [...], "p_x2": [...],
//    "distortion": "hamming" | [[...], ...],
//    "classifier_region": [0, 2, ...] | "bayes"}
//
// "bayes" derives the classifier once, on the clean source (identity channel).

#include <filesystem>
#include <string>

#include "rdc/classifier.hpp"
#include "rdc/source_model.hpp"

namespace rdc {

struct Problem {
  MixtureSource source;
  DistortionMeasure delta;
  BinaryClassifier classifier;
};

Problem parse_problem(const std::string& json_text);
Problem load_problem(const std::filesystem::path& path);

/// Canonical JSON for a problem (explicit region and matrix).
std::string problem_to_json(const Problem& problem);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string problem_hash(const Problem& problem);

}  // namespace rdc

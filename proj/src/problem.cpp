#include "rdc/problem.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rdc/error.hpp"

namespace rdc {
namespace {

using nlohmann::json;

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ValidationError(std::string("problem file: '") + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ValidationError(std::string("problem file: '") + key + "' holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

DistortionMeasure parse_distortion(const json& j, std::size_t n) {
  if (!j.contains("distortion")) return DistortionMeasure::hamming(n);
  const json& d = j.at("distortion");
  if (d.is_string()) {
    if (d.get<std::string>() != "hamming") {
      throw ValidationError("problem file: unknown distortion '" + d.get<std::string>() + "'");
    }
    return DistortionMeasure::hamming(n);
  }
  if (!d.is_array()) throw ValidationError("problem file: 'distortion' must be \"hamming\" or a matrix");
  std::vector<std::vector<double>> rows;
  for (const auto& row : d) {
    if (!row.is_array()) throw ValidationError("problem file: distortion rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ValidationError("problem file: distortion entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  DistortionMeasure out(Matrix::from_rows(rows));
  if (out.source_size() != n) {
    throw DimensionError("problem file: distortion matrix has " + std::to_string(out.source_size()) +
                         " rows, source has " + std::to_string(n) + " symbols");
  }
  return out;
}

}  // namespace

Problem parse_problem(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("problem file: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("problem file: top level must be an object");
  if (!j.contains("prior1") || !j.at("prior1").is_number()) {
    throw ValidationError("problem file: 'prior1' must be a number");
  }
  MixtureSource source(j.at("prior1").get<double>(), number_array(j, "p_x1"), number_array(j, "p_x2"));
  DistortionMeasure delta = parse_distortion(j, source.size());
  const std::size_t m = delta.reconstruction_size();

  if (!j.contains("classifier_region")) {
    throw ValidationError("problem file: 'classifier_region' is required");
  }
  const json& region = j.at("classifier_region");
  if (region.is_string()) {
    if (region.get<std::string>() != "bayes") {
      throw ValidationError("problem file: classifier_region must be \"bayes\" or an index list");
    }
    if (m != source.size()) {
      throw DimensionError("problem file: \"bayes\" needs equal source and reconstruction alphabets");
    }
    BinaryClassifier clf = bayes_region(source, Channel::identity(source.size()));
    return Problem{std::move(source), std::move(delta), std::move(clf)};
  }
  if (!region.is_array()) throw ValidationError("problem file: classifier_region must be a list");
  std::vector<std::size_t> idx;
  for (const auto& v : region) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ValidationError("problem file: classifier_region entries must be nonnegative integers");
    }
    idx.push_back(v.get<std::size_t>());
  }
  BinaryClassifier clf(m, idx);
  return Problem{std::move(source), std::move(delta), std::move(clf)};
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string problem_to_json(const Problem& problem) {
  json j;
  j["prior1"] = problem.source.prior1();
  j["p_x1"] = std::vector<double>(problem.source.p_x1().begin(), problem.source.p_x1().end());
  j["p_x2"] = std::vector<double>(problem.source.p_x2().begin(), problem.source.p_x2().end());
  j["distortion"] = problem.delta.matrix().to_rows();
  j["classifier_region"] = problem.classifier.region();
  return j.dump();
}

std::string problem_hash(const Problem& problem) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : problem_to_json(problem)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rdc

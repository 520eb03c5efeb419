// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nogo/ontology.hpp"

namespace nogo {

// On-disk model format (JSON):
// {
//   "lambda_count": 3,
//   "mu0": [0.6, 0.0, 0.4],
//   "mu1": [0.0, 0.6, 0.4],
//   "response": {                          // optional
//     "n": 2,
//     "entries": [
//       {"lambda": [0, 0], "probs": [p00, p01, p10, p11]},
//       ...one entry per point of Lambda^n...
//     ]
//   }
// }
struct ModelFile {
  OntModel model;
  std::optional<ResponseTable> response;
};

inline ModelFile parse_model_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model: root must be an object");
  if (!j.contains("lambda_count") || !j.contains("mu0") || !j.contains("mu1"))
    throw std::invalid_argument(
        "model: need lambda_count, mu0 and mu1 fields");
  const std::size_t lambda_count = j.at("lambda_count").get<std::size_t>();
  auto mu0 = j.at("mu0").get<std::vector<double>>();
  auto mu1 = j.at("mu1").get<std::vector<double>>();
  if (mu0.size() != lambda_count || mu1.size() != lambda_count)
    throw std::invalid_argument(
        "model: mu0/mu1 length must equal lambda_count");
  OntModel model(std::move(mu0), std::move(mu1));

  std::optional<ResponseTable> response;
  if (j.contains("response") && !j.at("response").is_null()) {
    const auto& r = j.at("response");
    const int n = r.at("n").get<int>();
    if (n < 1 || n > 62)
      throw std::invalid_argument("model: response.n out of range");
    const std::uint64_t rows = pow_u64(lambda_count, n);
    if (rows > kMaxLambdaTable)
      throw ResourceError("model: lambda_count^n exceeds table cap");
    const std::size_t outcomes = std::size_t{1} << n;
    std::vector<std::vector<double>> table(rows);
    std::vector<bool> seen(rows, false);
    for (const auto& entry : r.at("entries")) {
      const auto lambdas = entry.at("lambda").get<std::vector<std::size_t>>();
      if (lambdas.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("model: response lambda tuple wrong size");
      std::uint64_t idx = 0;
      for (std::size_t l : lambdas) {
        if (l >= lambda_count)
          throw std::invalid_argument("model: lambda value out of range");
        idx = idx * lambda_count + l;
      }
      if (seen[idx])
        throw std::invalid_argument("model: duplicate response entry");
      seen[idx] = true;
      auto probs = entry.at("probs").get<std::vector<double>>();
      if (probs.size() != outcomes)
        throw std::invalid_argument("model: response row needs 2^n entries");
      table[idx] = std::move(probs);
    }
    for (std::uint64_t idx = 0; idx < rows; ++idx)
      if (!seen[idx])
        throw std::invalid_argument(
            "model: response table does not cover all of Lambda^n");
    response.emplace(n, lambda_count, std::move(table));
  }
  return ModelFile{std::move(model), std::move(response)};
}

inline ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("model file " + path +
                                " is not valid JSON: " + e.what());
  }
  try {
    return parse_model_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("model file " + path +
                                " has invalid schema: " + e.what());
  }
}

inline nlohmann::json model_to_json(const OntModel& model,
                                    const ResponseTable* response = nullptr) {
  nlohmann::ordered_json j;
  j["lambda_count"] = model.lambda_count();
  j["mu0"] = model.mu0();
  j["mu1"] = model.mu1();
  if (response != nullptr) {
    nlohmann::ordered_json r;
    r["n"] = response->systems();
    nlohmann::ordered_json entries = nlohmann::json::array();
    for (std::size_t idx = 0; idx < response->row_count(); ++idx) {
      nlohmann::ordered_json entry;
      entry["lambda"] = response->lambdas_of(idx);
      entry["probs"] = response->row(idx);
      entries.push_back(std::move(entry));
    }
    r["entries"] = std::move(entries);
    j["response"] = std::move(r);
  }
  return j;
}

inline void save_model(const std::string& path, const OntModel& model,
                       const ResponseTable* response = nullptr) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(model, response).dump(2) << "\n";
}

}  // namespace nogo

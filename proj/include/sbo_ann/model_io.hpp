#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sbo_ann/dataset.hpp"
#include "sbo_ann/network.hpp"

namespace sbo_ann {

/// A trained network plus the scaler its inputs and outputs went through.
struct StoredModel {
  NetworkParams params;
  MinMaxScaler scaler;
  std::string algorithm;
  std::optional<double> training_rmse;

  friend bool operator==(const StoredModel &, const StoredModel &) = default;
};

inline nlohmann::ordered_json to_json(const StoredModel &m) {
  const auto &p = m.params;
  if (!p.single_hidden_layer())
    throw DimensionError("model files hold one-hidden-layer single-output networks");
  nlohmann::ordered_json j;
  j["format"] = "sbo-ann-model";
  j["version"] = 1;
  j["algorithm"] = m.algorithm;
  j["shape"] = p.shape().sizes();
  auto iw = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < p.hidden(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < p.inputs(); ++c)
      row.push_back(p.iw(r, c));
    iw.push_back(row);
  }
  j["iw"] = iw;
  auto b1 = nlohmann::ordered_json::array();
  auto lw = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < p.hidden(); ++i) {
    b1.push_back(p.b1(i));
    lw.push_back(p.lw(i));
  }
  j["b1"] = b1;
  j["lw"] = lw;
  j["b2"] = p.b2();

  nlohmann::ordered_json s;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    names.emplace_back(kColumnNames[i]);
  s["features"] = names;
  s["min"] = m.scaler.min();
  s["max"] = m.scaler.max();
  s["target_min"] = m.scaler.target_min();
  s["target_max"] = m.scaler.target_max();
  j["scaler"] = s;
  if (m.training_rmse)
    j["training_rmse"] = *m.training_rmse;
  return j;
}

inline StoredModel model_from_json(const nlohmann::json &j) {
  try {
    if (j.at("format").get<std::string>() != "sbo-ann-model")
      throw SchemaError("not a model file");
    auto shape = NetworkShape(j.at("shape").get<std::vector<std::size_t>>());
    auto iw = j.at("iw").get<std::vector<std::vector<double>>>();
    auto params = NetworkParams::from_blocks(iw, j.at("b1").get<std::vector<double>>(),
                                             j.at("lw").get<std::vector<double>>(), j.at("b2").get<double>());
    if (!(params.shape() == shape))
      throw SchemaError("model shape does not match its weight blocks");
    if (shape.inputs() != kFeatureCount)
      throw SchemaError("model expects " + std::to_string(shape.inputs()) + " inputs, the UCS task has 8");
    const auto &s = j.at("scaler");
    auto lo = s.at("min").get<std::vector<double>>();
    auto hi = s.at("max").get<std::vector<double>>();
    if (lo.size() != kFeatureCount || hi.size() != kFeatureCount)
      throw SchemaError("scaler must hold 8 feature ranges");
    FeatureVector min{};
    FeatureVector max{};
    std::copy(lo.begin(), lo.end(), min.begin());
    std::copy(hi.begin(), hi.end(), max.begin());
    StoredModel m{params,
                  MinMaxScaler(min, max, s.at("target_min").get<double>(), s.at("target_max").get<double>()),
                  j.value("algorithm", std::string{}), std::nullopt};
    if (j.contains("training_rmse"))
      m.training_rmse = j.at("training_rmse").get<double>();
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

inline void save_model(const std::string &path, const StoredModel &m) {
  std::ofstream os(path);
  if (!os)
    throw Error("cannot write " + path);
  os << to_json(m).dump(2) << '\n';
}

inline StoredModel load_model(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

} // namespace sbo_ann

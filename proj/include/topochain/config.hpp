#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "topochain/errors.hpp"
#include "topochain/lattice.hpp"

namespace topochain {

/// Loads a flat key/value JSON document whose keys mirror the LatticeParams
/// field names (J, delta, Je, DeltaC, kappa, theta, L, g0, DeltaQ). Unknown
/// keys are rejected so typos fail loudly.
inline LatticeParams params_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("config: document must be a JSON object");
  LatticeParams p;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "J")
        p.J = value.get<double>();
      else if (key == "delta")
        p.delta = value.get<double>();
      else if (key == "Je")
        p.Je = value.get<double>();
      else if (key == "DeltaC")
        p.DeltaC = value.get<double>();
      else if (key == "kappa")
        p.kappa = value.get<double>();
      else if (key == "theta")
        p.theta = value.get<double>();
      else if (key == "L")
        p.L = value.get<std::size_t>();
      else if (key == "g0")
        p.g0 = value.get<double>();
      else if (key == "DeltaQ")
        p.DeltaQ = value.get<double>();
      else
        throw ValidationError("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config: bad value for '" + key + "': " + e.what());
    }
  }
  return p;
}

inline LatticeParams params_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot read " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config: parse failure in " + path.string() + ": " + e.what());
  }
  return params_from_json(doc);
}

}  // namespace topochain

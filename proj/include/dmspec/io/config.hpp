#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dmspec/errors.hpp"
#include "dmspec/sampling.hpp"

namespace dmspec::io {

/// A sampling function object extended with run settings:
///   {"type": "trigpoly", "const": 0, "cos": [1], "sin": [],
///    "command": {"max_period": 10, ...},
///    "seed": 1, "format": "json", "plot": "out.svg", "threads": 0}
/// Everything but the function is optional; the function itself may be absent.
struct RunConfig {
  std::optional<SamplingFunction> function;
  nlohmann::json command = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> plot;
  std::optional<int> threads;

  /// command[key] converted to T, or fallback when absent. Throws
  /// InvalidParameter on a type mismatch.
  template <class T>
  T param(const std::string& key, T fallback) const {
    if (!command.contains(key)) return fallback;
    try {
      return command.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidParameter("command parameter '" + key + "' has the wrong type");
    }
  }
};

RunConfig parse_config(const nlohmann::json& j);
/// Throws InvalidParameter if the file cannot be read or parsed.
RunConfig load_config(const std::string& path);

/// "free", "const:<c>", "cos:<lambda>" (2λ·cos 2πω) or "bernoulli:<lambda>".
SamplingFunction parse_function_spec(const std::string& spec);

}  // namespace dmspec::io

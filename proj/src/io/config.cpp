#include "dmspec/io/config.hpp"

#include <fstream>
#include <sstream>

namespace dmspec::io {

RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameter("configuration must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("type")) c.function = SamplingFunction::from_json(j);
    if (j.contains("command")) {
      if (!j.at("command").is_object()) throw InvalidParameter("'command' must be an object");
      c.command = j.at("command");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    if (j.contains("plot")) c.plot = j.at("plot").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read configuration file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParameter("configuration '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

SamplingFunction parse_function_spec(const std::string& spec) {
  if (spec == "free") return SamplingFunction::constant(0.0);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidParameter("unknown function '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw InvalidParameter("function parameter '" + arg + "' is not a number");
  }
  if (kind == "const") return SamplingFunction::constant(value);
  if (kind == "cos") return SamplingFunction::cosine(value);
  if (kind == "bernoulli") return SamplingFunction::bernoulli(value);
  throw InvalidParameter("unknown function kind '" + kind + "'");
}

}  // namespace dmspec::io

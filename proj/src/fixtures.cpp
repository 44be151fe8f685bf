#include "heis/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heis/error.hpp"

#ifndef HEIS_FIXTURES_DIR
#define HEIS_FIXTURES_DIR "fixtures"
#endif

namespace heis {

namespace {

nlohmann::json load(const std::string& dir, const std::string& name) {
  const std::string path = dir + "/" + name;
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("fixture " + path + " is malformed: " + e.what());
  }
}

}  // namespace

std::string default_fixtures_dir() {
  if (const char* env = std::getenv("HEIS_FIXTURES"); env && *env) return env;
  return HEIS_FIXTURES_DIR;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LaguerreEnvelopeFixture load_laguerre_envelope(const std::string& dir) {
  const auto j = load(dir, "laguerre_envelope_constants.json");
  LaguerreEnvelopeFixture f;
  f.constants.C_fit = j.at("C_fit").get<double>();
  f.constants.gamma_fit = j.at("gamma_fit").get<double>();
  f.grid_hash = j.at("grid_hash").get<std::string>();
  return f;
}

double load_cn(const std::string& dir, int n) {
  const auto j = load(dir, "box_decay_constants.json");
  const auto key = std::to_string(n);
  if (!j.at("c_n").contains(key)) throw DomainError("no frozen c_n for n = " + key);
  return j.at("c_n").at(key).get<double>();
}

CauchyFixture load_cauchy(const std::string& dir) {
  const auto j = load(dir, "cauchy_constants.json");
  return {j.at("C").get<double>(), j.at("c3").get<double>()};
}

}  // namespace heis

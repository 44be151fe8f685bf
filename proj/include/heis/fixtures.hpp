#pragma once

#include <string>

#include "heis/laguerre.hpp"

namespace heis {

// Frozen calibration constants. Each lives in its own JSON file under the
// fixtures directory and is regenerated by the heis_calibrate tool.
struct LaguerreEnvelopeFixture {
  EnvelopeConstants constants;
  std::string grid_hash;  // the calibration grid
};

struct CauchyFixture {
  double C = 0.0;
  double c3 = 1.0;
};

// $HEIS_FIXTURES if set, else the directory compiled into the library.
std::string default_fixtures_dir();

LaguerreEnvelopeFixture load_laguerre_envelope(const std::string& dir);
double load_cn(const std::string& dir, int n);
CauchyFixture load_cauchy(const std::string& dir);

std::string read_text_file(const std::string& path);

}  // namespace heis

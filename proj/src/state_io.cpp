#include "qgeo/state_io.hpp"

#include <cmath>
#include <fstream>

#include "qgeo/errors.hpp"

namespace qgeo {

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x) && std::floor(x) == x && std::fabs(x) < 9.0e15)
    return static_cast<long long>(x);
  return x;
}

}  // namespace

nlohmann::json state_to_json(const PureState& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    amps.push_back({number(s.amps(i).real()), number(s.amps(i).imag())});
  return {{"shape", s.shape}, {"amps", amps}};
}

PureState state_from_json(const nlohmann::json& j) {
  try {
    Shape shape = j.at("shape").get<Shape>();
    const auto& a = j.at("amps");
    std::vector<cd> amps;
    amps.reserve(a.size());
    for (const auto& e : a) {
      if (e.is_number()) {
        amps.emplace_back(e.get<double>(), 0.0);
      } else {
        if (!e.is_array() || e.size() != 2) fail("BadStateFile", "amplitude must be [re, im]");
        amps.emplace_back(e[0].get<double>(), e[1].get<double>());
      }
    }
    return make_tensor(std::move(shape), amps);
  } catch (const nlohmann::json::exception& ex) {
    fail("BadStateFile", ex.what());
  }
}

PureState read_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("BadStateFile", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    fail("BadStateFile", path + ": " + ex.what());
  }
  return state_from_json(j);
}

void write_state(const std::string& path, const PureState& s) {
  std::ofstream out(path);
  if (!out) fail("IOError", "cannot write " + path);
  out << state_to_json(s).dump() << '\n';
}

}  // namespace qgeo

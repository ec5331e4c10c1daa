#pragma once

#include <string>

#include <json.hpp>

#include "qgeo/tensor.hpp"

namespace qgeo {

// {"shape":[d1,...,dn],"amps":[[re,im],...]}; integral parts are written as
// JSON integers so exact amplitudes survive a round trip.
nlohmann::json state_to_json(const PureState& s);
PureState state_from_json(const nlohmann::json& j);

PureState read_state(const std::string& path);
void write_state(const std::string& path, const PureState& s);

}  // namespace qgeo

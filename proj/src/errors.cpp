#include "qgeo/errors.hpp"

namespace qgeo {

Error::Error(std::string code, const std::string& detail)
    : std::runtime_error(detail.empty() ? code : code + ": " + detail),
      code_(std::move(code)) {}

void fail(const std::string& code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace qgeo

#pragma once

#include <stdexcept>
#include <string>

namespace qgeo {

// Every failure raised by the library carries a short code naming the
// violated contract (e.g. "ShapeMismatch"), so callers can branch on it
// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail);
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] void fail(const std::string& code, const std::string& detail = {});

inline void require(bool ok, const char* code, const std::string& detail = {}) {
  if (!ok) fail(code, detail);
}

}  // namespace qgeo

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qgeo::cli {

// Runs one verb; args excludes the program name. Returns 0 on success, 1 when
// a computation reports failure (e.g. a degeneration does not verify) and 2
// on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgeo::cli

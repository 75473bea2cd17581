#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmorph {

// args excludes the program name. Returns 0 on success, 1 on bad input or
// usage, 2 on an internal invariant violation.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cmorph

#pragma once

#include <stdexcept>
#include <string>

namespace cmorph {

// Bad input data: malformed files, invalid synth specs, contour maps that
// break the contour-line properties, too few levels.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A broken internal contract: dimension mismatch, nesting precondition,
// recursion guard, NODATA left after assembly.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace cmorph

#ifndef NILDYN_ERRORS_HPP
#define NILDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nildyn {

// Window bounds are inverted or a query left the represented range.
struct DegenerateWindowError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The window is too short to run the requested search; distinct from a
// search that ran to completion and found nothing.
struct InsufficientWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A closure property the algebra guarantees failed to hold.  Indicates a
// bug, never a bad input.
struct InternalConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace nildyn

#endif

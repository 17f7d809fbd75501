#pragma once

#include <ostream>

namespace heightkit {

/// Quick randomized property suite (fixed seeds). Prints one line per property; true if all hold.
bool run_selftest(std::ostream& out);

}  // namespace heightkit

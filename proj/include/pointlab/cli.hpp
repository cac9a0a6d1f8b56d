#pragma once

#include <iosfwd>

namespace pointlab::cli {

// Entry point of the `pointlab` tool. Streams are injectable for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pointlab::cli

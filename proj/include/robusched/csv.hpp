#ifndef ROBUSCHED_CSV_HPP
#define ROBUSCHED_CSV_HPP

#include <cstdio>
#include <string>

namespace robusched {

// All CSV numerics carry 12 significant digits so that re-running a
// command with the same seed reproduces byte-identical files.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace robusched

#endif

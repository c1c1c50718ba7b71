#pragma once

#include <cstdio>
#include <string>

namespace orbitmetric {

/// 17 significant digits: doubles round-trip losslessly through the CSV files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace orbitmetric

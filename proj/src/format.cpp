#include "twinarm/format.hpp"

#include <cmath>
#include <cstdio>

namespace twinarm {

std::string format_number(double value, int precision) {
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    return buf;
}

}  // namespace twinarm

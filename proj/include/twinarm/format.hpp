#pragma once

#include <string>

namespace twinarm {

/// %g-style text with `precision` significant digits; -0 prints as 0.
std::string format_number(double value, int precision = 10);

}  // namespace twinarm

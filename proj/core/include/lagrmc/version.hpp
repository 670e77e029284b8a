#pragma once

#include <string_view>

namespace lagrmc {

inline constexpr std::string_view project_name = "lagrmc";
inline constexpr std::string_view project_version = "0.1.0";

// Tag stamped into every JSON output so results can be traced to the code
// that produced them.
inline constexpr std::string_view version_tag = "lagrmc 0.1.0";

} // namespace lagrmc

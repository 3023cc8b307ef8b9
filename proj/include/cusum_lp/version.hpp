#pragma once

namespace cusum_lp {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr int table_format_version = 1;

}  // namespace cusum_lp

#pragma once

#include <string_view>
#include <vector>

namespace diffspot {

// Data files compiled into the library (class scales, prompt templates), so
// binaries work from any working directory. Implementation is generated at
// build time from the files under data/. Unknown names raise
// Error(ErrorCode::internal).
std::string_view embedded_data(std::string_view name);
std::vector<std::string_view> embedded_names();

}  // namespace diffspot

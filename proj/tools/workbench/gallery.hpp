#pragma once

#include <map>
#include <string>

namespace wb {

// Built-in problem files keyed by entry name (file name without .alg).
const std::map<std::string, std::string>& gallery();

}  // namespace wb

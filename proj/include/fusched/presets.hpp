#pragma once

#include <string>
#include <vector>

#include "fusched/types.hpp"

namespace fusched {

/// Every preset name accepted by make_preset.
std::vector<std::string> preset_names();

/// Hard-coded case-study configuration. Throws InputError for an unknown name.
DagSpec make_preset(const std::string& name);

}  // namespace fusched

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dissolve/scenario.hpp"

namespace dissolve::presets {

/// A named scenario shipped with the simulator, stored as config text.
struct Preset {
  std::string name;
  std::string summary;
  std::string text;
};

/// Every preset, in a stable order.
const std::vector<Preset>& all();

/// Throws std::invalid_argument for an unknown name.
const Preset& find(std::string_view name);

/// Parsed and validated config of a preset.
scenario::ScenarioConfig load(std::string_view name);

}  // namespace dissolve::presets

#pragma once

#include <string>

#include "friedrichs/model.hpp"

namespace friedrichs {

ModelSpec parse_scenario(const std::string& text);
ModelSpec load_scenario(const std::string& path);
std::string dump_scenario(const ModelSpec& spec, int indent = 2);
void save_scenario(const ModelSpec& spec, const std::string& path);

}  // namespace friedrichs

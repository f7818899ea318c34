#pragma once

#include <vector>

#include "run.hpp"

namespace nasalgan::cli {

std::vector<Command> all_commands();

}  // namespace nasalgan::cli

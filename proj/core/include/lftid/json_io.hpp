#pragma once

// JSON loading and saving for plants and interpolation pairs.  Matrices
// are arrays of row arrays; a plant file carries the nine constant blocks,
// the list "P" = [P_0, P_1, ...] and the parameter box.

#include <string>

#include "lftid/interpolation.hpp"
#include "lftid/lft_model.hpp"

namespace lftid {

LftPlant load_plant(const std::string& path);
InterpSpec load_interp_spec(const std::string& path);

void save_plant(const LftPlant& plant, const std::string& path);
void save_interp_spec(const InterpSpec& spec, const std::string& path);

}  // namespace lftid

#pragma once

#include <string>

#include "zbar/measures.hpp"
#include "zbar/monte_carlo.hpp"
#include "zbar/state_space.hpp"

namespace zbar {

// YAML text; errors are ValidationError with the offending key.
TransitionProfile parse_profile(const std::string& text);
MeasureZbar parse_measure(const std::string& text);
// CSV rows "from,to,x" with an optional header line.
TiltSchedule parse_schedule(const std::string& text);

TransitionProfile load_profile(const std::string& path);
MeasureZbar load_measure(const std::string& path);
TiltSchedule load_schedule(const std::string& path);

}  // namespace zbar

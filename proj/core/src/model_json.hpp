#pragma once

// Internal converters shared between regress.cpp and pipeline.cpp.

#include "autopower/regress.hpp"
#include "json_util.hpp"

namespace autopower {

detail::json linear_to_json(const LinearModel& m);
LinearModel linear_from_json(const detail::json& j, const std::string& ctx);
detail::json ensemble_to_json(const TreeEnsemble& m);
TreeEnsemble ensemble_from_json(const detail::json& j, const std::string& ctx);

} // namespace autopower

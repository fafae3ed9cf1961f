#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcdyn/dynamics.hpp"
#include "hcdyn/fixed_points.hpp"
#include "hcdyn/l1_lift.hpp"

namespace hcdyn {

/// 17 significant digits, as used in every CSV column.
std::string format_csv_number(double v);

nlohmann::json to_json(const FixedPointRecord& r);
FixedPointRecord fixed_point_from_json(const nlohmann::json& j);

std::string fixed_points_json(const std::vector<FixedPointRecord>& fps);
std::string fixed_points_csv(const std::vector<FixedPointRecord>& fps);

nlohmann::json to_json(const Trajectory& tr);
nlohmann::json to_json(const LimitVerdict& v);
std::string trajectory_csv(const Trajectory& tr);

std::string bracket_csv(const BracketSequence& b);
nlohmann::json to_json(const BracketSequence& b);

nlohmann::json to_json(const WeightSeq& w);
nlohmann::json to_json(const TruncatedVector& x);

}  // namespace hcdyn

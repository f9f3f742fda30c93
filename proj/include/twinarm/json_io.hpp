#pragma once

// JSON wire format shared by the CLI (--json) and the HTTP service.
// Field names are snake_case; top-level documents carry schema_version 1.

#include "twinarm/design.hpp"
#include "twinarm/ik.hpp"
#include "twinarm/perception.hpp"
#include "twinarm/planner.hpp"
#include "twinarm/tictactoe.hpp"

#include "json.hpp"

namespace twinarm {

inline constexpr int kSchemaVersion = 1;

nlohmann::json vec_to_json(const Vec3& v);
Vec3 vec_from_json(const nlohmann::json& j);
/// Row-major 9 numbers.
nlohmann::json rotation_to_json(const Mat3& r);
Mat3 rotation_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const Pose& pose);
void from_json(const nlohmann::json& j, Pose& pose);

void to_json(nlohmann::json& j, const IKResult& r);
void from_json(const nlohmann::json& j, IKResult& r);

void to_json(nlohmann::json& j, const TorqueReport& r);
void from_json(const nlohmann::json& j, TorqueReport& r);
void to_json(nlohmann::json& j, const SweepTable& t);
void from_json(const nlohmann::json& j, SweepTable& t);
void to_json(nlohmann::json& j, const FeasibilityReport& r);

void to_json(nlohmann::json& j, const PlanAction& a);
void from_json(const nlohmann::json& j, PlanAction& a);
void to_json(nlohmann::json& j, const Plan& p);
void from_json(const nlohmann::json& j, Plan& p);

void to_json(nlohmann::json& j, const PlaybackFrame& f);

void to_json(nlohmann::json& j, const BoardState& b);
BoardState board_from_json(const nlohmann::json& j);

void from_json(const nlohmann::json& j, Detection& d);
void to_json(nlohmann::json& j, const Detection& d);
void to_json(nlohmann::json& j, const LocalizedObject& o);

StripScene strip_scene_from_json(const nlohmann::json& j);
nlohmann::json strip_scene_to_json(const StripScene& scene);

/// Adds schema_version to an object document.
nlohmann::json versioned(nlohmann::json doc);

}  // namespace twinarm

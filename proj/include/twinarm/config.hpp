#pragma once

#include "twinarm/design.hpp"
#include "twinarm/ik.hpp"
#include "twinarm/kinematics.hpp"
#include "twinarm/perception.hpp"
#include "twinarm/planner.hpp"
#include "twinarm/tictactoe.hpp"

#include "json.hpp"

#include <string>

namespace twinarm {

struct CameraConfig {
    Mat3 K = Mat3::Identity();
    std::array<double, 2> head_joints{0.0, 0.0};
};

struct PlannerConfig {
    double inner_radius = 5.0;
    double approach_height = 5.0;
    HandoverConfig handover;
    Vec3 token_supply{15.0, -20.0, -46.0};  ///< where the human hands over X tokens, neck frame
    int playback_steps = 50;
};

/// Everything the CLI and service need. Every field has a working default.
struct RobotConfig {
    ArmSpec arm;
    BodyGeometry body;
    MotorSpec motor;
    IKParams ik;
    BoardGeometry board;
    CameraConfig camera;
    PlannerConfig planner;

    void validate() const;
    WorkspaceModel workspace() const;
    CameraModel camera_model() const;
    PlannerOptions planner_options() const;
};

/// Reads a (possibly partial) config document. Unknown keys are rejected with config_error.
RobotConfig config_from_json(const nlohmann::json& doc);
RobotConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const RobotConfig& config);

}  // namespace twinarm

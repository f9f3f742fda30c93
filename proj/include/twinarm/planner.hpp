#pragma once

#include "twinarm/ik.hpp"
#include "twinarm/kinematics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinarm {

/// Per-arm reachable region: a spherical shell around each shoulder origin (neck-base frame).
struct WorkspaceModel {
    ShoulderFrames shoulders;
    double reach = 50.0;
    double inner_radius = 5.0;

    static WorkspaceModel from(const ArmSpec& arm, const BodyGeometry& body, double inner_radius = 5.0);
    void validate() const;
    Vec3 shoulder_origin(ArmSide side) const { return shoulders[side].translation(); }
};

/// Inclusive on both shell radii.
bool in_workspace(const WorkspaceModel& ws, ArmSide side, const Vec3& point);

struct HandoverConfig {
    double forward = 20.0;  ///< x offset from the shoulder mid-point, cm
    double height = 0.0;    ///< z offset from shoulder height, cm
    double margin = 5.0;    ///< required clearance inside both reach spheres, cm
};

/// Exchange point on the y = 0 plane within reach - margin of both shoulders.
Vec3 handover_point(const WorkspaceModel& ws, const HandoverConfig& config = {});

enum class ActionKind { move_to, grip, release };

std::string_view to_string(ActionKind kind);

struct PlanAction {
    ActionKind kind = ActionKind::move_to;
    ArmSide arm = ArmSide::right;
    std::optional<Pose> pose;               ///< move_to only, neck-base frame
    std::optional<JointVector> joints;      ///< move_to only, IK solution that validated the pose
    bool approach = false;                  ///< hover waypoint around a grip/release
    std::string label;
};

struct Plan {
    std::vector<PlanAction> actions;
    bool handover = false;

    /// Actions excluding approach waypoints.
    std::size_t core_action_count() const;
};

struct PlannerOptions {
    double approach_height = 5.0;  ///< hover offset along +z; 0 disables approach waypoints
    HandoverConfig handover;
    IKParams ik;
};

/**
 * Grasp pose for `point` (neck frame) with the tool z-axis radial from the
 * arm's reach centre: outward when the wrist centre stays outside the inner
 * two-link reach, inward otherwise.
 */
Pose grasp_pose(const ArmSpec& arm, const WorkspaceModel& ws, ArmSide side, const Vec3& point);

/// Runs solve_full on a neck-frame pose for one arm.
IKResult solve_in_neck_frame(const ArmSpec& arm, const WorkspaceModel& ws, ArmSide side,
                             const Pose& pose, const IKParams& params = {});

/**
 * Pick-and-place plan. One arm does the whole task when it reaches both
 * points; otherwise the picker drops the object at the handover point and the
 * other arm carries it to the goal. Every move_to is IK-validated.
 */
Plan plan_pick_place(const ArmSpec& arm, const WorkspaceModel& ws, const Vec3& object_pos,
                     const Vec3& goal_pos, const PlannerOptions& options = {});

struct PlaybackFrame {
    int step = 0;
    std::array<double, 6> joints_left{};
    std::array<double, 6> joints_right{};
    int action_index = 0;
};

/// Linear joint-space interpolation (shortest angular path) between consecutive move_to targets.
std::vector<PlaybackFrame> playback_frames(const Plan& plan, int steps_per_segment = 50,
                                           const JointVector& start_left = JointVector::zeros(ChainKind::arm),
                                           const JointVector& start_right = JointVector::zeros(ChainKind::arm));

}  // namespace twinarm

#include "twinarm/planner.hpp"

#include "twinarm/error.hpp"
#include "twinarm/format.hpp"

#include <cmath>

namespace twinarm {

namespace {

std::string describe(const Vec3& p) {
    return "(" + format_number(p.x(), 6) + ", " + format_number(p.y(), 6) + ", " + format_number(p.z(), 6) + ")";
}

struct Builder {
    const ArmSpec& arm;
    const WorkspaceModel& ws;
    const PlannerOptions& options;
    Plan plan;
    // Last validated joints per arm, used to seed the next solve on that arm.
    std::optional<std::array<double, 3>> seed_left, seed_right;

    void move(ArmSide side, const Vec3& point, const std::string& label, bool approach) {
        if (!in_workspace(ws, side, point)) {
            throw Error(ErrorCode::planning_failure,
                        "waypoint '" + label + "' " + describe(point) + " is outside the " +
                            std::string(to_string(side)) + " workspace");
        }
        const Pose pose = grasp_pose(arm, ws, side, point);
        IKParams params = options.ik;
        auto& seed = side == ArmSide::left ? seed_left : seed_right;
        if (seed) params.init = *seed;
        const IKResult ik = solve_in_neck_frame(arm, ws, side, pose, params);
        if (!ik.converged) {
            throw Error(ErrorCode::planning_failure,
                        "IK failed for waypoint '" + label + "' " + describe(point) + " on the " +
                            std::string(to_string(side)) + " arm: " + ik.diagnostic);
        }
        seed = std::array<double, 3>{ik.joints[0], ik.joints[1], ik.joints[2]};
        plan.actions.push_back({ActionKind::move_to, side, pose, ik.joints, approach, label});
    }

    void hover(ArmSide side, const Vec3& point, const std::string& label) {
        if (options.approach_height <= 0.0) return;
        const Vec3 above = point + Vec3(0.0, 0.0, options.approach_height);
        if (in_workspace(ws, side, above)) move(side, above, "approach:" + label, true);
    }

    void act(ArmSide side, ActionKind kind, const Vec3& point, const std::string& label) {
        hover(side, point, label);
        move(side, point, label, false);
        plan.actions.push_back({kind, side, std::nullopt, std::nullopt, false, label});
        hover(side, point, label);
    }
};

ArmSide nearer(const WorkspaceModel& ws, const Vec3& p, ArmSide a, ArmSide b) {
    const double da = (p - ws.shoulder_origin(a)).norm();
    const double db = (p - ws.shoulder_origin(b)).norm();
    return db < da ? b : a;
}

std::array<double, 6> to_array(const JointVector& j) {
    return {j[0], j[1], j[2], j[3], j[4], j[5]};
}

}  // namespace

WorkspaceModel WorkspaceModel::from(const ArmSpec& arm, const BodyGeometry& body, double inner_radius) {
    arm.validate();
    body.validate();
    WorkspaceModel ws{shoulder_frames(body), arm.reach(), inner_radius};
    ws.validate();
    return ws;
}

void WorkspaceModel::validate() const {
    if (!(inner_radius >= 0.0 && inner_radius < reach)) {
        throw Error(ErrorCode::invalid_parameter, "workspace needs 0 <= inner_radius < reach");
    }
}

bool in_workspace(const WorkspaceModel& ws, ArmSide side, const Vec3& point) {
    const double d = (point - ws.shoulder_origin(side)).norm();
    return d >= ws.inner_radius && d <= ws.reach;
}

Vec3 handover_point(const WorkspaceModel& ws, const HandoverConfig& config) {
    const Vec3 left = ws.shoulder_origin(ArmSide::left);
    const Vec3 right = ws.shoulder_origin(ArmSide::right);
    const Vec3 mid = 0.5 * (left + right);
    const double half = 0.5 * (left - right).norm();
    const double usable = ws.reach - config.margin;
    if (half > usable) {
        throw Error(ErrorCode::no_handover_region,
                    "shoulders are " + format_number(2 * half) + " cm apart; reach " +
                        format_number(ws.reach) + " cm leaves no shared region");
    }

    Vec3 offset(config.forward, 0.0, config.height);
    const double allowed = std::sqrt(usable * usable - half * half);
    if (offset.norm() > allowed) offset *= allowed / offset.norm();
    const Vec3 p = mid + offset;
    if (!in_workspace(ws, ArmSide::left, p) || !in_workspace(ws, ArmSide::right, p)) {
        throw Error(ErrorCode::no_handover_region, "handover point " + describe(p) + " is not reachable by both arms");
    }
    return p;
}

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::move_to: return "move_to";
        case ActionKind::grip: return "grip";
        case ActionKind::release: return "release";
    }
    return "move_to";
}

std::size_t Plan::core_action_count() const {
    std::size_t n = 0;
    for (const auto& a : actions) n += a.approach ? 0 : 1;
    return n;
}

Pose grasp_pose(const ArmSpec& arm, const WorkspaceModel& ws, ArmSide side, const Vec3& point) {
    // Reach centre is the S1 axis, L0 above the shoulder origin along the shoulder z.
    const Vec3 centre = ws.shoulder_origin(side) + Vec3(0.0, 0.0, arm.L0);
    Vec3 radial = point - centre;
    const double dist = radial.norm();
    radial = dist > 1e-12 ? Vec3(radial / dist) : Vec3::UnitZ();

    const double inner_two_link = std::abs(arm.L1 - arm.L2);
    const Vec3 z = dist - arm.l_eff >= inner_two_link ? radial : Vec3(-radial);
    Vec3 ref = Vec3::UnitZ();
    if (std::abs(z.dot(ref)) > 0.9) ref = Vec3::UnitX();
    const Vec3 x = ref.cross(z).normalized();
    const Vec3 y = z.cross(x);
    Mat3 r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    return Pose{RigidTransform(r, point)};
}

IKResult solve_in_neck_frame(const ArmSpec& arm, const WorkspaceModel& ws, ArmSide side,
                             const Pose& pose, const IKParams& params) {
    const Pose local{invert(ws.shoulders[side]) * pose.transform};
    return solve_full(arm, local, params);
}

Plan plan_pick_place(const ArmSpec& arm, const WorkspaceModel& ws, const Vec3& object_pos,
                     const Vec3& goal_pos, const PlannerOptions& options) {
    if (!object_pos.allFinite() || !goal_pos.allFinite()) {
        throw Error(ErrorCode::invalid_parameter, "object and goal must be finite");
    }
    const bool obj_l = in_workspace(ws, ArmSide::left, object_pos);
    const bool obj_r = in_workspace(ws, ArmSide::right, object_pos);
    const bool goal_l = in_workspace(ws, ArmSide::left, goal_pos);
    const bool goal_r = in_workspace(ws, ArmSide::right, goal_pos);
    if (!obj_l && !obj_r) {
        throw Error(ErrorCode::unreachable_task, "object " + describe(object_pos) + " is outside both workspaces");
    }
    if (!goal_l && !goal_r) {
        throw Error(ErrorCode::unreachable_task, "goal " + describe(goal_pos) + " is outside both workspaces");
    }

    Builder b{arm, ws, options, {}, std::nullopt, std::nullopt};
    const bool left_both = obj_l && goal_l;
    const bool right_both = obj_r && goal_r;
    if (left_both || right_both) {
        ArmSide side = left_both ? ArmSide::left : ArmSide::right;
        if (left_both && right_both) side = nearer(ws, object_pos, ArmSide::right, ArmSide::left);
        b.act(side, ActionKind::grip, object_pos, "object");
        b.act(side, ActionKind::release, goal_pos, "goal");
        b.plan.handover = false;
        return std::move(b.plan);
    }

    // No single arm covers both points, so the reachable sets are disjoint arms.
    const ArmSide picker = obj_l ? ArmSide::left : ArmSide::right;
    const ArmSide placer = picker == ArmSide::left ? ArmSide::right : ArmSide::left;
    const Vec3 exchange = handover_point(ws, options.handover);
    b.act(picker, ActionKind::grip, object_pos, "object");
    b.act(picker, ActionKind::release, exchange, "handover");
    b.act(placer, ActionKind::grip, exchange, "handover");
    b.act(placer, ActionKind::release, goal_pos, "goal");
    b.plan.handover = true;
    return std::move(b.plan);
}

std::vector<PlaybackFrame> playback_frames(const Plan& plan, int steps_per_segment,
                                           const JointVector& start_left, const JointVector& start_right) {
    if (steps_per_segment < 1) throw Error(ErrorCode::invalid_parameter, "steps_per_segment must be >= 1");
    std::array<double, 6> left = to_array(start_left);
    std::array<double, 6> right = to_array(start_right);
    std::vector<PlaybackFrame> frames;
    int step = 0;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
        const auto& action = plan.actions[i];
        const int index = static_cast<int>(i);
        if (action.kind != ActionKind::move_to || !action.joints) {
            frames.push_back({step++, left, right, index});
            continue;
        }
        auto& current = action.arm == ArmSide::left ? left : right;
        const std::array<double, 6> from = current;
        const std::array<double, 6> to = to_array(*action.joints);
        for (int s = 1; s <= steps_per_segment; ++s) {
            const double f = static_cast<double>(s) / steps_per_segment;
            for (int j = 0; j < 6; ++j) {
                current[j] = normalize_angle(from[j] + f * normalize_angle(to[j] - from[j]));
            }
            frames.push_back({step++, left, right, index});
        }
        current = to;
    }
    return frames;
}

}  // namespace twinarm

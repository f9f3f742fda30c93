#pragma once

#include "twinarm/transforms.hpp"

#include <array>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace twinarm {

/// Inclusive joint range in radians.
struct JointLimit {
    double lower = -std::numbers::pi;
    double upper = std::numbers::pi;

    bool contains(double value) const { return value >= lower && value <= upper; }
};

/// Aluminium sheet used for the two arm links. Density kg/cm^3, thickness and breadth cm.
struct SheetSpec {
    double density = 2.7e-3;
    double thickness = 0.3;
    double breadth = 12.0;

    /// Linear density K (kg/cm) of a link cut from this sheet.
    double linear_density() const { return density * breadth * thickness; }
    void validate() const;
};

/**
 * Geometry and mass parameters of one arm.
 *
 * Lengths in cm, masses in kg. L0 is the offset of the S1 axis from the
 * shoulder base along the arm's z-axis; it is left at 0 unless configured.
 */
struct ArmSpec {
    double L0 = 0.0;
    double L1 = 20.0;
    double L2 = 22.0;
    double l_eff = 8.0;
    double motor_mass = 0.064;
    double payload_mass = 0.2;
    SheetSpec sheet;
    std::array<JointLimit, 6> joint_limits{};

    /// L1 + L2: the length shared between the two sized links.
    double link_budget() const { return L1 + L2; }
    /// L1 + L2 + l_eff: maximum distance of the tool tip from the S1 axis.
    double reach() const { return L1 + L2 + l_eff; }
    void validate() const;
};

/// Neck and head dimensions, cm.
struct BodyGeometry {
    double neck_length = 46.0;
    double shoulder_spacing = 76.0;
    double L_H0 = 5.0;
    double L_H1 = 3.4;
    std::array<JointLimit, 2> head_joint_limits{};

    void validate() const;
};

enum class ChainKind { arm, head };
enum class ArmSide { left, right };

std::string_view to_string(ArmSide side);
ArmSide parse_arm_side(std::string_view text);

/// Ordered joint angles (radians) for either chain. Arity is checked at construction.
class JointVector {
public:
    JointVector(ChainKind kind, std::vector<double> values);

    static JointVector arm(const std::array<double, 6>& values);
    static JointVector head(double pan, double tilt);
    static JointVector zeros(ChainKind kind);

    ChainKind kind() const { return kind_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    /// Throws joint_limit if any value lies outside its limit.
    void check_limits(std::span<const JointLimit> limits) const;

private:
    ChainKind kind_;
    std::vector<double> values_;
};

/// Pose of a chain's end frame in its base frame.
struct Pose {
    RigidTransform transform;

    const Vec3& position() const { return transform.translation(); }
    const Mat3& rotation() const { return transform.rotation(); }
};

/// The six arm DH rows at the given joints, with the fixed +pi/2 and -pi/2 offsets on rows 2 and 3.
std::array<DHRow, 6> arm_dh_rows(const ArmSpec& spec, const JointVector& joints);
std::array<DHRow, 2> head_dh_rows(const BodyGeometry& geometry, const JointVector& joints);

/// Literal product of the six arm DH matrices, expressed in the DH base frame.
RigidTransform arm_dh_chain(const ArmSpec& spec, const JointVector& joints);

/**
 * Fixed rotation from the DH base frame to the shoulder frame.
 *
 * The DH chain and the closed-form position model describe the same arm in
 * different axes: DH gives (-B cos t0, -B sin t0, -Z) where the closed form
 * gives (B sin t0, B cos t0, Z). The map (x, y, z) -> (-y, -x, -z) is a proper
 * rotation (pi about (1, -1, 0)/sqrt 2) and needs no translation.
 */
const RigidTransform& dh_base_to_shoulder();

/// Arm forward kinematics in the shoulder frame. Throws joint_limit on limit violations.
Pose arm_fk(const ArmSpec& spec, const JointVector& joints);

/// Cumulative frames 0..6 of the arm in the shoulder frame (frame 0 is the base).
std::vector<RigidTransform> arm_frames(const ArmSpec& spec, const JointVector& joints);

/// Camera frame to neck-base frame.
Pose head_fk(const BodyGeometry& geometry, const JointVector& joints);

/// Tool-tip position with a straight wrist, shoulder frame.
Vec3 position_closed_form(const ArmSpec& spec, double theta0, double theta1, double theta2);

struct ShoulderFrames {
    RigidTransform left;
    RigidTransform right;

    const RigidTransform& operator[](ArmSide side) const {
        return side == ArmSide::left ? left : right;
    }
};

/// Shoulder frames expressed in the neck-base frame (z up; shoulders sit neck_length below).
ShoulderFrames shoulder_frames(const BodyGeometry& geometry);

}  // namespace twinarm

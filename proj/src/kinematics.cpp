#include "twinarm/kinematics.hpp"

#include "twinarm/error.hpp"

#include <cmath>
#include <string>

namespace twinarm {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::invalid_parameter, what);
}

void validate_limits(std::span<const JointLimit> limits) {
    for (const auto& l : limits) {
        require(std::isfinite(l.lower) && std::isfinite(l.upper) && l.lower <= l.upper,
                "joint limits must be finite with lower <= upper");
    }
}

}  // namespace

void SheetSpec::validate() const {
    require(std::isfinite(density) && density >= 0.0, "sheet density must be >= 0");
    require(std::isfinite(thickness) && thickness >= 0.0, "sheet thickness must be >= 0");
    require(std::isfinite(breadth) && breadth >= 0.0, "sheet breadth must be >= 0");
}

void ArmSpec::validate() const {
    require(std::isfinite(L0) && L0 >= 0.0, "L0 must be >= 0");
    require(std::isfinite(L1) && L1 >= 0.0, "L1 must be >= 0");
    require(std::isfinite(L2) && L2 >= 0.0, "L2 must be >= 0");
    require(std::isfinite(l_eff) && l_eff >= 0.0, "l_eff must be >= 0");
    require(reach() > 0.0, "L1 + L2 + l_eff must be positive");
    require(std::isfinite(motor_mass) && motor_mass >= 0.0, "motor_mass must be >= 0");
    require(std::isfinite(payload_mass) && payload_mass >= 0.0, "payload_mass must be >= 0");
    sheet.validate();
    validate_limits(joint_limits);
}

void BodyGeometry::validate() const {
    require(std::isfinite(neck_length) && neck_length > 0.0, "neck_length must be positive");
    require(std::isfinite(shoulder_spacing) && shoulder_spacing > 0.0, "shoulder_spacing must be positive");
    require(std::isfinite(L_H0) && L_H0 > 0.0, "L_H0 must be positive");
    require(std::isfinite(L_H1) && L_H1 > 0.0, "L_H1 must be positive");
    validate_limits(head_joint_limits);
}

std::string_view to_string(ArmSide side) {
    return side == ArmSide::left ? "left" : "right";
}

ArmSide parse_arm_side(std::string_view text) {
    if (text == "left") return ArmSide::left;
    if (text == "right") return ArmSide::right;
    throw Error(ErrorCode::invalid_parameter, "arm must be 'left' or 'right', got '" + std::string(text) + "'");
}

JointVector::JointVector(ChainKind kind, std::vector<double> values)
    : kind_(kind), values_(std::move(values)) {
    const std::size_t arity = kind == ChainKind::arm ? 6 : 2;
    if (values_.size() != arity) {
        throw Error(ErrorCode::invalid_parameter,
                    std::string(kind == ChainKind::arm ? "arm" : "head") + " joint vector needs " +
                        std::to_string(arity) + " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) require(std::isfinite(v), "joint values must be finite");
}

JointVector JointVector::arm(const std::array<double, 6>& values) {
    return JointVector(ChainKind::arm, std::vector<double>(values.begin(), values.end()));
}

JointVector JointVector::head(double pan, double tilt) {
    return JointVector(ChainKind::head, {pan, tilt});
}

JointVector JointVector::zeros(ChainKind kind) {
    return JointVector(kind, std::vector<double>(kind == ChainKind::arm ? 6 : 2, 0.0));
}

void JointVector::check_limits(std::span<const JointLimit> limits) const {
    for (std::size_t i = 0; i < values_.size() && i < limits.size(); ++i) {
        if (!limits[i].contains(values_[i])) {
            throw Error(ErrorCode::joint_limit,
                        "joint " + std::to_string(i) + " = " + std::to_string(values_[i]) +
                            " rad outside [" + std::to_string(limits[i].lower) + ", " +
                            std::to_string(limits[i].upper) + "]");
        }
    }
}

std::array<DHRow, 6> arm_dh_rows(const ArmSpec& spec, const JointVector& joints) {
    require(joints.kind() == ChainKind::arm, "arm kinematics needs an arm joint vector");
    return {
        DHRow(joints[0], -kPi / 2, 0.0, -spec.L0),
        DHRow(joints[1] + kPi / 2, 0.0, spec.L1, 0.0),
        DHRow(joints[2] - kPi / 2, -kPi / 2, 0.0, 0.0),
        DHRow(joints[3], kPi / 2, 0.0, spec.L2),
        DHRow(joints[4], -kPi / 2, 0.0, 0.0),
        DHRow(joints[5], 0.0, 0.0, spec.l_eff),
    };
}

std::array<DHRow, 2> head_dh_rows(const BodyGeometry& geometry, const JointVector& joints) {
    require(joints.kind() == ChainKind::head, "head kinematics needs a head joint vector");
    return {
        DHRow(joints[0], kPi / 2, 0.0, geometry.L_H0),
        DHRow(joints[1], 0.0, geometry.L_H1, 0.0),
    };
}

RigidTransform arm_dh_chain(const ArmSpec& spec, const JointVector& joints) {
    RigidTransform out;
    for (const auto& row : arm_dh_rows(spec, joints)) out = out * dh_row_to_transform(row);
    return out;
}

const RigidTransform& dh_base_to_shoulder() {
    static const RigidTransform c = [] {
        Mat3 r;
        r << 0, -1, 0,
            -1, 0, 0,
             0, 0, -1;
        return RigidTransform::from_rotation(r);
    }();
    return c;
}

Pose arm_fk(const ArmSpec& spec, const JointVector& joints) {
    joints.check_limits(spec.joint_limits);
    return Pose{dh_base_to_shoulder() * arm_dh_chain(spec, joints)};
}

std::vector<RigidTransform> arm_frames(const ArmSpec& spec, const JointVector& joints) {
    joints.check_limits(spec.joint_limits);
    std::vector<RigidTransform> frames{dh_base_to_shoulder()};
    for (const auto& row : arm_dh_rows(spec, joints)) {
        frames.push_back(frames.back() * dh_row_to_transform(row));
    }
    return frames;
}

Pose head_fk(const BodyGeometry& geometry, const JointVector& joints) {
    joints.check_limits(geometry.head_joint_limits);
    const auto rows = head_dh_rows(geometry, joints);
    return Pose{dh_row_to_transform(rows[0]) * dh_row_to_transform(rows[1])};
}

Vec3 position_closed_form(const ArmSpec& spec, double theta0, double theta1, double theta2) {
    const double forearm = spec.L2 + spec.l_eff;
    const double bracket = spec.L1 * std::sin(theta1) + forearm * std::sin(theta1 + theta2);
    return {bracket * std::sin(theta0),
            bracket * std::cos(theta0),
            spec.L1 * std::cos(theta1) + forearm * std::cos(theta1 + theta2) + spec.L0};
}

ShoulderFrames shoulder_frames(const BodyGeometry& geometry) {
    const double half = geometry.shoulder_spacing / 2.0;
    return {
        RigidTransform::from_translation({0.0, half, -geometry.neck_length}),
        RigidTransform::from_translation({0.0, -half, -geometry.neck_length}),
    };
}

}  // namespace twinarm

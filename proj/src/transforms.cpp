#include "twinarm/transforms.hpp"

#include "twinarm/error.hpp"

#include <cmath>
#include <numbers>

namespace twinarm {

double normalize_angle(double radians) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(radians, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

DHRow::DHRow(double theta, double alpha, double r, double d) {
    if (!std::isfinite(theta) || !std::isfinite(alpha) || !std::isfinite(r) || !std::isfinite(d)) {
        throw Error(ErrorCode::invalid_parameter, "DH row fields must be finite");
    }
    theta_ = normalize_angle(theta);
    alpha_ = normalize_angle(alpha);
    r_ = r;
    d_ = d;
}

RigidTransform::RigidTransform() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

RigidTransform::RigidTransform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
    if (!translation.allFinite()) {
        throw Error(ErrorCode::invalid_parameter, "translation must be finite");
    }
    if (!is_rotation(rotation)) {
        throw Error(ErrorCode::invalid_parameter, "rotation is not orthonormal with det +1");
    }
}

RigidTransform RigidTransform::from_translation(const Vec3& t) {
    return RigidTransform(Mat3::Identity(), t);
}

RigidTransform RigidTransform::from_rotation(const Mat3& r) {
    return RigidTransform(r, Vec3::Zero());
}

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
    if (std::abs(m(3, 0)) > kTolerance || std::abs(m(3, 1)) > kTolerance ||
        std::abs(m(3, 2)) > kTolerance || std::abs(m(3, 3) - 1.0) > kTolerance) {
        throw Error(ErrorCode::invalid_parameter, "bottom row of a homogeneous transform must be [0 0 0 1]");
    }
    return RigidTransform(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Mat4 RigidTransform::matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation_;
    m.topRightCorner<3, 1>() = translation_;
    return m;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
    return RigidTransform(Unchecked{}, rotation_ * rhs.rotation_,
                          rotation_ * rhs.translation_ + translation_);
}

bool RigidTransform::is_rotation(const Mat3& r, double tol) {
    if (!r.allFinite()) return false;
    if (((r.transpose() * r) - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(r.determinant() - 1.0) <= tol;
}

RigidTransform dh_row_to_transform(const DHRow& row) {
    const double ct = std::cos(row.theta());
    const double st = std::sin(row.theta());
    const double ca = std::cos(row.alpha());
    const double sa = std::sin(row.alpha());

    Mat3 r;
    r << ct, -st * ca, st * sa,
         st, ct * ca, -ct * sa,
         0.0, sa, ca;
    const Vec3 t(row.r() * ct, row.r() * st, row.d());
    return RigidTransform(r, t);
}

RigidTransform compose(std::span<const RigidTransform> sequence) {
    RigidTransform out;
    for (const auto& t : sequence) out = out * t;
    return out;
}

RigidTransform compose(std::initializer_list<RigidTransform> sequence) {
    return compose(std::span<const RigidTransform>(sequence.begin(), sequence.size()));
}

RigidTransform invert(const RigidTransform& t) {
    const Mat3 rt = t.rotation().transpose();
    return RigidTransform(RigidTransform::Unchecked{}, rt, -rt * t.translation());
}

Vec3 apply(const RigidTransform& t, const Vec3& p) {
    return t.rotation() * p + t.translation();
}

double rotation_distance(const Mat3& a, const Mat3& b) {
    return (a - b).norm();
}

}  // namespace twinarm

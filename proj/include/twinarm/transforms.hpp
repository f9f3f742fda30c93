#pragma once

#include <Eigen/Dense>

#include <span>

namespace twinarm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

/// One Denavit-Hartenberg row. theta and alpha are stored normalized to (-pi, pi].
/// Lengths r (along x) and d (along z) are in cm.
class DHRow {
public:
    DHRow(double theta, double alpha, double r, double d);

    double theta() const { return theta_; }
    double alpha() const { return alpha_; }
    double r() const { return r_; }
    double d() const { return d_; }

private:
    double theta_;
    double alpha_;
    double r_;
    double d_;
};

/**
 * Homogeneous rigid transform (rotation + translation in cm).
 *
 * Construction from raw parts checks that the rotation is orthonormal with
 * det = +1 (tolerance 1e-9). Values are immutable once built.
 */
class RigidTransform {
public:
    static constexpr double kTolerance = 1e-9;

    RigidTransform();
    RigidTransform(const Mat3& rotation, const Vec3& translation);

    static RigidTransform identity() { return {}; }
    static RigidTransform from_translation(const Vec3& t);
    static RigidTransform from_rotation(const Mat3& r);
    static RigidTransform from_matrix(const Mat4& m);

    const Mat3& rotation() const { return rotation_; }
    const Vec3& translation() const { return translation_; }
    Mat4 matrix() const;

    RigidTransform operator*(const RigidTransform& rhs) const;

    /// True when `r` is orthonormal with determinant +1 within `tol`.
    static bool is_rotation(const Mat3& r, double tol = kTolerance);

private:
    struct Unchecked {};
    RigidTransform(Unchecked, const Mat3& rotation, const Vec3& translation)
        : rotation_(rotation), translation_(translation) {}

    friend RigidTransform invert(const RigidTransform& t);

    Mat3 rotation_;
    Vec3 translation_;
};

/// The standard DH link matrix: Rz(theta) Tz(d) Tx(r) Rx(alpha).
RigidTransform dh_row_to_transform(const DHRow& row);

/// Left-to-right product; an empty sequence gives the identity.
RigidTransform compose(std::span<const RigidTransform> sequence);
RigidTransform compose(std::initializer_list<RigidTransform> sequence);

RigidTransform invert(const RigidTransform& t);

Vec3 apply(const RigidTransform& t, const Vec3& p);

/// Frobenius norm of the difference of two rotations.
double rotation_distance(const Mat3& a, const Mat3& b);

}  // namespace twinarm

#pragma once

#include "twinarm/kinematics.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace twinarm {

/// Tuning of the iterative position solver.
struct IKParams {
    double gamma = 0.5;          ///< step size on each damped pseudo-inverse update
    double tol = 1e-6;           ///< convergence threshold on |target - position|, cm
    int max_iter = 200;          ///< iteration cap per start
    double damping = 1e-3;       ///< lambda in J^T (J J^T + lambda^2 I)^-1
    int restarts = 5;            ///< random restarts after the initial start fails
    double max_step = 0.5;       ///< per-iteration clamp on |delta theta|_inf, rad
    int max_halvings = 10;       ///< step halvings allowed when the residual grows
    std::uint64_t seed = 7;      ///< restart sampler seed
    std::array<double, 3> init{0.0, 0.7853981633974483, 1.5707963267948966};

    void validate() const;
};

struct IKResult {
    JointVector joints = JointVector::zeros(ChainKind::arm);
    bool converged = false;
    int iterations = 0;          ///< iterations of the start that produced `joints`
    int attempts = 0;            ///< starts tried (initial + restarts used)
    double residual = 0.0;       ///< position error at exit, cm
    double rotation_error = 0.0; ///< Frobenius orientation error (full solves only)
    bool wrist_singular = false;
    std::vector<double> trace;   ///< residual after each accepted iteration, starting with the initial residual
    std::string diagnostic;
};

/// d(position_closed_form)/d(theta0, theta1, theta2), columns in joint order. cm/rad.
Mat3 position_jacobian(const ArmSpec& spec, double theta0, double theta1, double theta2);

/**
 * Damped pseudo-inverse J^T (J J^T + lambda^2 I)^-1.
 *
 * With lambda = 0 the Moore-Penrose pseudo-inverse is returned (via SVD), which
 * equals J^-1 when J has full rank.
 */
Mat3 pseudo_inverse(const Mat3& jacobian, double damping);

/**
 * Solves (theta0, theta1, theta2) so that position_closed_form hits `target`.
 *
 * Iterates theta += gamma * J+ (target - x) with step halving whenever the
 * residual would grow, so each start's trace is non-increasing. Failed starts
 * are retried from uniform random in-limit configurations. Returns the best
 * start; the wrist joints of the result are zero.
 */
IKResult solve_position(const ArmSpec& spec, const Vec3& target, const std::array<double, 3>& init,
                        const IKParams& params = {});

/// Rotation of frame 3 in the DH base frame (first three arm rows).
Mat3 arm_rotation_0_3(double theta0, double theta1, double theta2);
/// Rotation of the spherical wrist, frame 3 to frame 6.
Mat3 wrist_rotation(double theta3, double theta4, double theta5);

struct WristSolution {
    std::array<double, 3> angles{};
    bool singular = false;
};

/**
 * Extracts (theta3, theta4, theta5) from R36 = R03^T * R06 (DH base frame).
 *
 * Picks the sin(theta4) >= 0 branch. When sin(theta4) < 1e-9 only theta3 +/- theta5
 * is determined; theta3 is then fixed to 0 and `singular` is set.
 */
WristSolution solve_wrist(const Mat3& target_r06, double theta0, double theta1, double theta2);

/**
 * Full pose IK in the shoulder frame (the frame of arm_fk).
 *
 * Position stage targets the wrist centre (tool tip minus l_eff along the tool
 * z-axis), then the wrist angles come from the orientation. The result is
 * re-checked through arm_fk.
 */
IKResult solve_full(const ArmSpec& spec, const Pose& target, const IKParams& params = {});

}  // namespace twinarm

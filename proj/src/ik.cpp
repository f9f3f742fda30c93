#include "twinarm/ik.hpp"

#include "twinarm/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace twinarm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWristSingular = 1e-9;
// Slack for re-evaluating the converged pose through the DH product instead of the closed form.
constexpr double kRecheckSlack = 1e-9;

Mat3 rot_z(double a) {
    return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix();
}

Mat3 rot_x(double a) {
    return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix();
}

struct Attempt {
    std::array<double, 3> theta{};
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

Attempt run_attempt(const ArmSpec& spec, const Vec3& target, std::array<double, 3> theta,
                    const IKParams& p) {
    Attempt a;
    auto residual_at = [&](const std::array<double, 3>& t) {
        return (target - position_closed_form(spec, t[0], t[1], t[2])).norm();
    };

    double r = residual_at(theta);
    a.trace.push_back(r);
    while (r > p.tol && a.iterations < p.max_iter) {
        const Vec3 error = target - position_closed_form(spec, theta[0], theta[1], theta[2]);
        Vec3 step = p.gamma * pseudo_inverse(position_jacobian(spec, theta[0], theta[1], theta[2]),
                                             p.damping) * error;
        const double largest = step.cwiseAbs().maxCoeff();
        if (largest > p.max_step) step *= p.max_step / largest;

        bool accepted = false;
        std::array<double, 3> candidate{};
        double rc = r;
        for (int h = 0; h <= p.max_halvings; ++h) {
            for (int i = 0; i < 3; ++i) candidate[i] = theta[i] + step[i];
            rc = residual_at(candidate);
            if (rc < r) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stalled: no descent along the damped direction

        theta = candidate;
        r = rc;
        ++a.iterations;
        a.trace.push_back(r);
    }

    for (auto& t : theta) t = normalize_angle(t);
    a.theta = theta;
    a.residual = r;
    a.converged = r <= p.tol;
    return a;
}

bool within(const std::array<JointLimit, 6>& limits, std::span<const double> values, std::size_t offset) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!limits[offset + i].contains(values[i])) return false;
    }
    return true;
}

}  // namespace

void IKParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::invalid_parameter, what);
    };
    require(gamma > 0.0 && gamma <= 2.0, "gamma must lie in (0, 2]");
    require(tol > 0.0, "tol must be positive");
    require(max_iter >= 1, "max_iter must be >= 1");
    require(damping >= 0.0 && std::isfinite(damping), "damping must be >= 0");
    require(restarts >= 0, "restarts must be >= 0");
    require(max_step > 0.0, "max_step must be positive");
    require(max_halvings >= 0, "max_halvings must be >= 0");
    for (double v : init) require(std::isfinite(v), "init angles must be finite");
}

Mat3 position_jacobian(const ArmSpec& spec, double theta0, double theta1, double theta2) {
    const double forearm = spec.L2 + spec.l_eff;
    const double s0 = std::sin(theta0), c0 = std::cos(theta0);
    const double s1 = std::sin(theta1), c1 = std::cos(theta1);
    const double s12 = std::sin(theta1 + theta2), c12 = std::cos(theta1 + theta2);

    const double bracket = spec.L1 * s1 + forearm * s12;
    const double bracket_d1 = spec.L1 * c1 + forearm * c12;
    const double bracket_d2 = forearm * c12;

    Mat3 j;
    j << bracket * c0, bracket_d1 * s0, bracket_d2 * s0,
        -bracket * s0, bracket_d1 * c0, bracket_d2 * c0,
         0.0, -bracket, -forearm * s12;
    return j;
}

Mat3 pseudo_inverse(const Mat3& jacobian, double damping) {
    if (damping < 0.0) throw Error(ErrorCode::invalid_parameter, "damping must be >= 0");
    if (damping > 0.0) {
        const Mat3 gram = jacobian * jacobian.transpose() + damping * damping * Mat3::Identity();
        return jacobian.transpose() * gram.inverse();
    }
    Eigen::JacobiSVD<Mat3> svd(jacobian, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3& sigma = svd.singularValues();
    const double cutoff = 1e-12 * std::max(1.0, sigma(0));
    Vec3 inv = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
        if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

IKResult solve_position(const ArmSpec& spec, const Vec3& target, const std::array<double, 3>& init,
                        const IKParams& params) {
    if (!target.allFinite()) throw Error(ErrorCode::invalid_parameter, "IK target must be finite");
    params.validate();

    std::mt19937_64 rng(params.seed);
    Attempt best;
    best.residual = std::numeric_limits<double>::infinity();
    bool have_best = false;
    int attempts = 0;

    for (int start = 0; start <= params.restarts; ++start) {
        std::array<double, 3> seed_theta = init;
        if (start > 0) {
            for (int i = 0; i < 3; ++i) {
                std::uniform_real_distribution<double> pick(spec.joint_limits[i].lower,
                                                            spec.joint_limits[i].upper);
                seed_theta[i] = pick(rng);
            }
        }
        ++attempts;
        Attempt a = run_attempt(spec, target, seed_theta, params);
        const bool in_limits = within(spec.joint_limits, a.theta, 0);
        if (!in_limits) a.converged = false;

        const bool better = !have_best || (a.converged && !best.converged) ||
                            (a.converged == best.converged && a.residual < best.residual);
        if (better) {
            best = std::move(a);
            have_best = true;
        }
        if (best.converged) break;
    }

    IKResult out;
    out.joints = JointVector::arm({best.theta[0], best.theta[1], best.theta[2], 0.0, 0.0, 0.0});
    out.converged = best.converged;
    out.iterations = best.iterations;
    out.attempts = attempts;
    out.residual = best.residual;
    out.trace = std::move(best.trace);
    if (!out.converged) {
        out.diagnostic = "position stage did not converge: best residual " +
                         std::to_string(out.residual) + " cm after " + std::to_string(attempts) +
                         " starts";
    }
    return out;
}

Mat3 arm_rotation_0_3(double theta0, double theta1, double theta2) {
    return rot_z(theta0) * rot_x(-kPi / 2) * rot_z(theta1 + kPi / 2) * rot_z(theta2 - kPi / 2) *
           rot_x(-kPi / 2);
}

Mat3 wrist_rotation(double theta3, double theta4, double theta5) {
    return rot_z(theta3) * rot_x(kPi / 2) * rot_z(theta4) * rot_x(-kPi / 2) * rot_z(theta5);
}

WristSolution solve_wrist(const Mat3& target_r06, double theta0, double theta1, double theta2) {
    if (!RigidTransform::is_rotation(target_r06)) {
        throw Error(ErrorCode::invalid_parameter, "wrist target is not a rotation matrix");
    }
    const Mat3 r36 = arm_rotation_0_3(theta0, theta1, theta2).transpose() * target_r06;

    // R36 = [[c3c4c5 - s3s5, ., -c3s4], [s3c4c5 + c3s5, ., -s3s4], [s4c5, -s4s5, c4]]
    WristSolution out;
    const double s4 = std::hypot(r36(0, 2), r36(1, 2));
    const double theta4 = std::atan2(s4, r36(2, 2));
    double theta3 = 0.0;
    if (s4 < kWristSingular) {
        out.singular = true;
    } else {
        theta3 = std::atan2(-r36(1, 2), -r36(0, 2));
    }
    // theta5 from the residual z-rotation after undoing theta3 and theta4.
    const Mat3 rest = (rot_z(theta3) * rot_x(kPi / 2) * rot_z(theta4) * rot_x(-kPi / 2)).transpose() * r36;
    const double theta5 = std::atan2(rest(1, 0), rest(0, 0));

    out.angles = {normalize_angle(theta3), normalize_angle(theta4), normalize_angle(theta5)};
    return out;
}

IKResult solve_full(const ArmSpec& spec, const Pose& target, const IKParams& params) {
    const Vec3 tool_axis = target.rotation().col(2);
    const Vec3 wrist_centre = target.position() - spec.l_eff * tool_axis;

    ArmSpec wrist_spec = spec;
    wrist_spec.l_eff = 0.0;
    IKResult result = solve_position(wrist_spec, wrist_centre, params.init, params);
    if (!result.converged) {
        const RigidTransform reached = dh_base_to_shoulder() * arm_dh_chain(spec, result.joints);
        result.residual = (target.position() - reached.translation()).norm();
        return result;
    }

    const double t0 = result.joints[0], t1 = result.joints[1], t2 = result.joints[2];
    const Mat3 r06 = dh_base_to_shoulder().rotation().transpose() * target.rotation();
    const WristSolution wrist = solve_wrist(r06, t0, t1, t2);

    std::array<double, 3> w = wrist.angles;
    if (!within(spec.joint_limits, w, 3)) {
        // The other branch of the same orientation: (t3 + pi, -t4, t5 + pi).
        const std::array<double, 3> flipped{normalize_angle(w[0] + kPi), normalize_angle(-w[1]),
                                            normalize_angle(w[2] + kPi)};
        if (!within(spec.joint_limits, flipped, 3)) {
            result.converged = false;
            result.diagnostic = "wrist solution outside joint limits";
            return result;
        }
        w = flipped;
    }

    result.joints = JointVector::arm({t0, t1, t2, w[0], w[1], w[2]});
    result.wrist_singular = wrist.singular;

    const Pose reached = arm_fk(spec, result.joints);
    result.residual = (reached.position() - target.position()).norm();
    result.rotation_error = rotation_distance(reached.rotation(), target.rotation());
    if (result.residual > params.tol + kRecheckSlack || result.rotation_error > 1e-6) {
        result.converged = false;
        result.diagnostic = "orientation/position mismatch after wrist solve: position " +
                            std::to_string(result.residual) + " cm, rotation " +
                            std::to_string(result.rotation_error);
    }
    return result;
}

}  // namespace twinarm

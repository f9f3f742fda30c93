#include "twinarm/config.hpp"

#include "twinarm/error.hpp"
#include "twinarm/json_io.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

namespace twinarm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::config_error, path + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) fail(path, "unknown field '" + key + "'");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& path) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(path + "." + key, e.what());
    }
}

template <std::size_t N>
void read_limits(const json& obj, const char* key, std::array<JointLimit, N>& out, const std::string& path) {
    if (!obj.contains(key)) return;
    const json& arr = obj.at(key);
    if (!arr.is_array() || arr.size() != N) fail(path + "." + key, "expected " + std::to_string(N) + " [lower, upper] pairs");
    for (std::size_t i = 0; i < N; ++i) {
        if (!arr[i].is_array() || arr[i].size() != 2) fail(path + "." + key, "expected [lower, upper]");
        out[i] = {arr[i][0].get<double>(), arr[i][1].get<double>()};
    }
}

template <std::size_t N>
json limits_to_json(const std::array<JointLimit, N>& limits) {
    json arr = json::array();
    for (const auto& l : limits) arr.push_back({l.lower, l.upper});
    return arr;
}

Mat3 matrix_from_rows(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected 3 rows");
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
        if (!j[r].is_array() || j[r].size() != 3) fail(path, "expected 3 columns per row");
        for (int c = 0; c < 3; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

json matrix_to_rows(const Mat3& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
    return rows;
}

}  // namespace

void RobotConfig::validate() const {
    arm.validate();
    body.validate();
    motor.validate();
    ik.validate();
    board.validate();
    camera_model().validate();
    workspace();
    if (planner.playback_steps < 1) throw Error(ErrorCode::config_error, "planner.playback_steps must be >= 1");
}

WorkspaceModel RobotConfig::workspace() const {
    return WorkspaceModel::from(arm, body, planner.inner_radius);
}

CameraModel RobotConfig::camera_model() const {
    return CameraModel{camera.K, JointVector::head(camera.head_joints[0], camera.head_joints[1]), body};
}

PlannerOptions RobotConfig::planner_options() const {
    return PlannerOptions{planner.approach_height, planner.handover, ik};
}

RobotConfig config_from_json(const json& doc) {
    RobotConfig c;
    check_keys(doc, {"schema_version", "arm", "body", "motor", "ik", "board", "camera", "planner"}, "config");
    if (doc.contains("schema_version") && doc.at("schema_version") != kSchemaVersion) {
        fail("config.schema_version", "unsupported version");
    }

    try {
        if (doc.contains("arm")) {
            const json& a = doc.at("arm");
            const std::string p = "config.arm";
            check_keys(a, {"L0", "L1", "L2", "l_eff", "motor_mass", "payload_mass", "sheet", "joint_limits"}, p);
            read(a, "L0", c.arm.L0, p);
            read(a, "L1", c.arm.L1, p);
            read(a, "L2", c.arm.L2, p);
            read(a, "l_eff", c.arm.l_eff, p);
            read(a, "motor_mass", c.arm.motor_mass, p);
            read(a, "payload_mass", c.arm.payload_mass, p);
            read_limits(a, "joint_limits", c.arm.joint_limits, p);
            if (a.contains("sheet")) {
                const json& s = a.at("sheet");
                check_keys(s, {"density", "thickness", "breadth"}, p + ".sheet");
                read(s, "density", c.arm.sheet.density, p + ".sheet");
                read(s, "thickness", c.arm.sheet.thickness, p + ".sheet");
                read(s, "breadth", c.arm.sheet.breadth, p + ".sheet");
            }
        }
        if (doc.contains("body")) {
            const json& b = doc.at("body");
            const std::string p = "config.body";
            check_keys(b, {"neck_length", "shoulder_spacing", "L_H0", "L_H1", "head_joint_limits"}, p);
            read(b, "neck_length", c.body.neck_length, p);
            read(b, "shoulder_spacing", c.body.shoulder_spacing, p);
            read(b, "L_H0", c.body.L_H0, p);
            read(b, "L_H1", c.body.L_H1, p);
            read_limits(b, "head_joint_limits", c.body.head_joint_limits, p);
        }
        if (doc.contains("motor")) {
            const json& m = doc.at("motor");
            const std::string p = "config.motor";
            check_keys(m, {"stall_torque", "efficiency", "safety_factor", "shoulder_motor_count"}, p);
            read(m, "stall_torque", c.motor.stall_torque, p);
            read(m, "efficiency", c.motor.efficiency, p);
            read(m, "safety_factor", c.motor.safety_factor, p);
            read(m, "shoulder_motor_count", c.motor.shoulder_motor_count, p);
        }
        if (doc.contains("ik")) {
            const json& k = doc.at("ik");
            const std::string p = "config.ik";
            check_keys(k, {"gamma", "tol", "max_iter", "damping", "restarts", "max_step", "max_halvings", "seed", "init"}, p);
            read(k, "gamma", c.ik.gamma, p);
            read(k, "tol", c.ik.tol, p);
            read(k, "max_iter", c.ik.max_iter, p);
            read(k, "damping", c.ik.damping, p);
            read(k, "restarts", c.ik.restarts, p);
            read(k, "max_step", c.ik.max_step, p);
            read(k, "max_halvings", c.ik.max_halvings, p);
            read(k, "seed", c.ik.seed, p);
            read(k, "init", c.ik.init, p);
        }
        if (doc.contains("board")) {
            const json& b = doc.at("board");
            const std::string p = "config.board";
            check_keys(b, {"width", "height", "cell_width", "cell_height", "board_pose"}, p);
            read(b, "width", c.board.width, p);
            read(b, "height", c.board.height, p);
            read(b, "cell_width", c.board.cell_width, p);
            read(b, "cell_height", c.board.cell_height, p);
            if (b.contains("board_pose")) {
                check_keys(b.at("board_pose"), {"position", "rotation"}, p + ".board_pose");
                c.board.board_pose = b.at("board_pose").get<Pose>().transform;
            }
        }
        if (doc.contains("camera")) {
            const json& cam = doc.at("camera");
            const std::string p = "config.camera";
            check_keys(cam, {"K", "head_joints"}, p);
            if (cam.contains("K")) c.camera.K = matrix_from_rows(cam.at("K"), p + ".K");
            read(cam, "head_joints", c.camera.head_joints, p);
        }
        if (doc.contains("planner")) {
            const json& pl = doc.at("planner");
            const std::string p = "config.planner";
            check_keys(pl, {"inner_radius", "approach_height", "handover", "token_supply", "playback_steps"}, p);
            read(pl, "inner_radius", c.planner.inner_radius, p);
            read(pl, "approach_height", c.planner.approach_height, p);
            read(pl, "playback_steps", c.planner.playback_steps, p);
            if (pl.contains("token_supply")) c.planner.token_supply = vec_from_json(pl.at("token_supply"));
            if (pl.contains("handover")) {
                const json& h = pl.at("handover");
                check_keys(h, {"forward", "height", "margin"}, p + ".handover");
                read(h, "forward", c.planner.handover.forward, p + ".handover");
                read(h, "height", c.planner.handover.height, p + ".handover");
                read(h, "margin", c.planner.handover.margin, p + ".handover");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("config: ") + e.what());
    }

    try {
        c.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::config_error, std::string("config: ") + e.what());
    }
    return c;
}

RobotConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::config_error, "cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_error, "config file '" + path + "': " + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const RobotConfig& c) {
    return {
        {"schema_version", kSchemaVersion},
        {"arm",
         {{"L0", c.arm.L0}, {"L1", c.arm.L1}, {"L2", c.arm.L2}, {"l_eff", c.arm.l_eff},
          {"motor_mass", c.arm.motor_mass}, {"payload_mass", c.arm.payload_mass},
          {"sheet", {{"density", c.arm.sheet.density}, {"thickness", c.arm.sheet.thickness}, {"breadth", c.arm.sheet.breadth}}},
          {"joint_limits", limits_to_json(c.arm.joint_limits)}}},
        {"body",
         {{"neck_length", c.body.neck_length}, {"shoulder_spacing", c.body.shoulder_spacing},
          {"L_H0", c.body.L_H0}, {"L_H1", c.body.L_H1},
          {"head_joint_limits", limits_to_json(c.body.head_joint_limits)}}},
        {"motor",
         {{"stall_torque", c.motor.stall_torque}, {"efficiency", c.motor.efficiency},
          {"safety_factor", c.motor.safety_factor}, {"shoulder_motor_count", c.motor.shoulder_motor_count}}},
        {"ik",
         {{"gamma", c.ik.gamma}, {"tol", c.ik.tol}, {"max_iter", c.ik.max_iter}, {"damping", c.ik.damping},
          {"restarts", c.ik.restarts}, {"max_step", c.ik.max_step}, {"max_halvings", c.ik.max_halvings},
          {"seed", c.ik.seed}, {"init", c.ik.init}}},
        {"board",
         {{"width", c.board.width}, {"height", c.board.height}, {"cell_width", c.board.cell_width},
          {"cell_height", c.board.cell_height}, {"board_pose", Pose{c.board.board_pose}}}},
        {"camera", {{"K", matrix_to_rows(c.camera.K)}, {"head_joints", c.camera.head_joints}}},
        {"planner",
         {{"inner_radius", c.planner.inner_radius}, {"approach_height", c.planner.approach_height},
          {"handover", {{"forward", c.planner.handover.forward}, {"height", c.planner.handover.height}, {"margin", c.planner.handover.margin}}},
          {"token_supply", vec_to_json(c.planner.token_supply)},
          {"playback_steps", c.planner.playback_steps}}},
    };
}

}  // namespace twinarm

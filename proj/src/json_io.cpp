#include "twinarm/json_io.hpp"

#include "twinarm/error.hpp"

namespace twinarm {

using nlohmann::json;

namespace {

std::array<double, 6> joint_array(const JointVector& j) {
    return {j[0], j[1], j[2], j[3], j[4], j[5]};
}

JointVector arm_joints_from_json(const json& j) {
    return JointVector(ChainKind::arm, j.get<std::vector<double>>());
}

ActionKind parse_action_kind(const std::string& s) {
    if (s == "move_to") return ActionKind::move_to;
    if (s == "grip") return ActionKind::grip;
    if (s == "release") return ActionKind::release;
    throw Error(ErrorCode::invalid_parameter, "unknown action kind '" + s + "'");
}

}  // namespace

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::invalid_parameter, "expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json rotation_to_json(const Mat3& r) {
    json arr = json::array();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) arr.push_back(r(i, k));
    return arr;
}

Mat3 rotation_from_json(const json& j) {
    if (!j.is_array() || j.size() != 9) throw Error(ErrorCode::invalid_parameter, "rotation needs 9 numbers (row-major)");
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r(i, k) = j[static_cast<std::size_t>(i * 3 + k)].get<double>();
    return r;
}

void to_json(json& j, const Pose& pose) {
    j = {{"position", vec_to_json(pose.position())}, {"rotation", rotation_to_json(pose.rotation())}};
}

void from_json(const json& j, Pose& pose) {
    const Mat3 r = j.contains("rotation") ? rotation_from_json(j.at("rotation")) : Mat3::Identity();
    pose = Pose{RigidTransform(r, vec_from_json(j.at("position")))};
}

void to_json(json& j, const IKResult& r) {
    j = {{"joints", joint_array(r.joints)},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"attempts", r.attempts},
         {"residual", r.residual},
         {"rotation_error", r.rotation_error},
         {"wrist_singular", r.wrist_singular},
         {"trace", r.trace},
         {"diagnostic", r.diagnostic}};
}

void from_json(const json& j, IKResult& r) {
    r.joints = arm_joints_from_json(j.at("joints"));
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.attempts = j.value("attempts", 0);
    r.residual = j.at("residual").get<double>();
    r.rotation_error = j.value("rotation_error", 0.0);
    r.wrist_singular = j.value("wrist_singular", false);
    r.trace = j.value("trace", std::vector<double>{});
    r.diagnostic = j.value("diagnostic", std::string{});
}

void to_json(json& j, const TorqueReport& r) {
    j = {{"L1", r.L1}, {"L2", r.L2}, {"T1", r.T1}, {"T2", r.T2}, {"feasible", r.feasible}};
}

void from_json(const json& j, TorqueReport& r) {
    r.L1 = j.at("L1").get<double>();
    r.L2 = j.at("L2").get<double>();
    r.T1 = j.at("T1").get<double>();
    r.T2 = j.at("T2").get<double>();
    r.feasible = j.at("feasible").get<bool>();
}

void to_json(json& j, const SweepTable& t) {
    j = {{"rows", t.rows},
         {"limits", {{"T1wc", t.limits.T1wc}, {"T2wc", t.limits.T2wc}}},
         {"budget", t.budget},
         {"sentinel_value", t.sentinel_value}};
}

void from_json(const json& j, SweepTable& t) {
    t.rows = j.at("rows").get<std::vector<TorqueReport>>();
    t.limits = {j.at("limits").at("T1wc").get<double>(), j.at("limits").at("T2wc").get<double>()};
    t.budget = j.at("budget").get<double>();
    t.sentinel_value = j.value("sentinel_value", -10.0);
}

void to_json(json& j, const FeasibilityReport& r) {
    auto interval = [](const std::optional<Interval>& i) -> json {
        if (!i) return nullptr;
        return json::array({i->lower, i->upper});
    };
    j = {{"grid_interval", interval(r.grid)},
         {"continuous_interval", interval(r.continuous)},
         {"reference_interval", json::array({r.reference.lower, r.reference.upper})},
         {"reference_reproduced", r.reference_reproduced},
         {"note", r.note}};
}

void to_json(json& j, const PlanAction& a) {
    j = {{"kind", std::string(to_string(a.kind))},
         {"arm", std::string(to_string(a.arm))},
         {"approach", a.approach},
         {"label", a.label}};
    j["pose"] = a.pose ? json(*a.pose) : json(nullptr);
    j["joints"] = a.joints ? json(joint_array(*a.joints)) : json(nullptr);
}

void from_json(const json& j, PlanAction& a) {
    a.kind = parse_action_kind(j.at("kind").get<std::string>());
    a.arm = parse_arm_side(j.at("arm").get<std::string>());
    a.approach = j.value("approach", false);
    a.label = j.value("label", std::string{});
    a.pose.reset();
    a.joints.reset();
    if (j.contains("pose") && !j.at("pose").is_null()) a.pose = j.at("pose").get<Pose>();
    if (j.contains("joints") && !j.at("joints").is_null()) a.joints = arm_joints_from_json(j.at("joints"));
}

void to_json(json& j, const Plan& p) {
    j = {{"handover", p.handover}, {"actions", p.actions}};
}

void from_json(const json& j, Plan& p) {
    p.handover = j.at("handover").get<bool>();
    p.actions = j.at("actions").get<std::vector<PlanAction>>();
}

void to_json(json& j, const PlaybackFrame& f) {
    j = {{"step", f.step},
         {"joints_left", f.joints_left},
         {"joints_right", f.joints_right},
         {"action_index", f.action_index}};
}

void to_json(json& j, const BoardState& b) {
    json cells = json::array();
    for (Cell c : b.cells()) cells.push_back(c == Cell::x ? "X" : c == Cell::o ? "O" : "");
    j = {{"cells", cells},
         {"side_to_move", std::string(to_string(b.side_to_move()))},
         {"status", std::string(to_string(b.status()))}};
}

BoardState board_from_json(const json& j) {
    const json& cells = j.at("cells");
    if (!cells.is_array() || cells.size() != 9) throw Error(ErrorCode::invalid_parameter, "board needs 9 cells");
    std::array<Cell, 9> out;
    for (std::size_t i = 0; i < 9; ++i) {
        const std::string s = cells[i].get<std::string>();
        out[i] = s.empty() ? Cell::empty : (parse_token(s) == Token::x ? Cell::x : Cell::o);
    }
    return BoardState::from_cells(out, parse_token(j.at("side_to_move").get<std::string>()));
}

void from_json(const json& j, Detection& d) {
    d.class_label = j.at("class_label").get<std::string>();
    const auto box = j.at("bbox").get<std::array<double, 4>>();
    d.bbox = {box[0], box[1], box[2], box[3]};
    d.confidence = j.at("confidence").get<double>();
    d.validate();
}

void to_json(json& j, const Detection& d) {
    j = {{"class_label", d.class_label},
         {"bbox", {d.bbox.u_min, d.bbox.v_min, d.bbox.u_max, d.bbox.v_max}},
         {"confidence", d.confidence}};
}

void to_json(json& j, const LocalizedObject& o) {
    j = {{"class_label", o.class_label},
         {"position", o.position ? vec_to_json(*o.position) : json(nullptr)},
         {"status", o.position ? "ok" : "no_depth"}};
}

StripScene strip_scene_from_json(const json& j) {
    StripScene s;
    if (j.contains("image")) {
        s.width = j.at("image").at("width").get<int>();
        s.height = j.at("image").at("height").get<int>();
    }
    const json& cam = j.at("camera");
    const json& k = cam.at("K");
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) s.camera.K(r, c) = k.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
    const auto head = cam.value("head_joints", std::array<double, 2>{0.0, 0.0});
    s.camera.head_joints = JointVector::head(head[0], head[1]);
    const json& corners = j.at("corners");
    if (!corners.is_array() || corners.size() != 4) throw Error(ErrorCode::invalid_parameter, "scene needs 4 corners");
    for (std::size_t i = 0; i < 4; ++i) s.corners[i] = vec_from_json(corners[i]);
    return s;
}

json strip_scene_to_json(const StripScene& s) {
    json k = json::array();
    for (int r = 0; r < 3; ++r) k.push_back({s.camera.K(r, 0), s.camera.K(r, 1), s.camera.K(r, 2)});
    json corners = json::array();
    for (const auto& c : s.corners) corners.push_back(vec_to_json(c));
    return {{"image", {{"width", s.width}, {"height", s.height}}},
            {"camera", {{"K", k}, {"head_joints", {s.camera.head_joints[0], s.camera.head_joints[1]}}}},
            {"corners", corners}};
}

json versioned(json doc) {
    doc["schema_version"] = kSchemaVersion;
    return doc;
}

}  // namespace twinarm

#include "twinarm/service.hpp"

#include "twinarm/error.hpp"
#include "twinarm/json_io.hpp"

#include "httplib.h"

#include <cmath>
#include <fstream>
#include <numbers>

namespace twinarm {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Service::Response error_response(int status, std::string_view code, const std::string& message) {
    return {status, {{"error", std::string(code)}, {"message", message}}};
}

double angle_scale(const json& req) {
    const std::string units = req.value("units", std::string("rad"));
    if (units == "rad") return 1.0;
    if (units == "deg") return kDeg;
    throw Error(ErrorCode::invalid_parameter, "units must be 'rad' or 'deg'");
}

std::vector<double> scaled(std::vector<double> values, double factor) {
    for (auto& v : values) v *= factor;
    return values;
}

double query_number(const std::map<std::string, std::string>& q, const std::string& key, double fallback) {
    const auto it = q.find(key);
    if (it == q.end() || it->second.empty()) return fallback;
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
}

}  // namespace

BoardState replay(Token first, const std::vector<MoveRecord>& history) {
    BoardState board = BoardState::empty(first);
    for (const auto& m : history) board = step_game(board, m.cell, m.token);
    return board;
}

Service::Service(RobotConfig config, std::optional<std::string> journal_path)
    : config_(std::move(config)), workspace_(config_.workspace()), journal_path_(std::move(journal_path)) {
    config_.validate();
    if (journal_path_) load_journal();
}

Service::Response Service::dispatch(const std::string& method, const std::string& path,
                                    const std::map<std::string, std::string>& query,
                                    const std::string& body) {
    try {
        json req = json::object();
        if (method == "POST" && !body.empty()) {
            req = json::parse(body);
            if (!req.is_object()) return error_response(400, "malformed_request", "body must be a JSON object");
        }
        if (method == "GET" && path == "/config") return get_config();
        if (method == "POST" && path == "/fk") return post_fk(req);
        if (method == "POST" && path == "/ik") return post_ik(req);
        if (method == "GET" && path == "/design/sweep") return get_sweep(query);
        if (method == "POST" && path == "/plan") return post_plan(req);
        if (method == "POST" && path == "/localize") return post_localize(req);
        if (method == "POST" && path == "/game/new") return post_game_new(req);
        if (method == "POST" && path == "/game/move") return post_game_move(req);
        if (method == "GET" && path == "/game/state") return get_game_state(query);
        return error_response(404, "not_found", method + " " + path + " is not an endpoint");
    } catch (const json::exception& e) {
        return error_response(400, "malformed_request", e.what());
    } catch (const std::invalid_argument& e) {
        return error_response(400, "malformed_request", std::string("bad number: ") + e.what());
    } catch (const std::out_of_range& e) {
        return error_response(400, "malformed_request", std::string("number out of range: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::not_found) return error_response(404, to_string(e.code()), e.what());
        return error_response(422, to_string(e.code()), e.what());
    }
}

Service::Response Service::get_config() const {
    return {200, config_to_json(config_)};
}

Service::Response Service::post_fk(const json& req) const {
    const double scale = angle_scale(req);
    const std::string arm = req.value("arm", std::string("right"));
    const auto values = scaled(req.at("joints").get<std::vector<double>>(), scale);

    if (arm == "head") {
        const Pose pose = head_fk(config_.body, JointVector(ChainKind::head, values));
        return {200, versioned({{"arm", arm}, {"frame", "neck"}, {"pose", pose},
                                {"origins", json::array({vec_to_json(Vec3::Zero()), vec_to_json(pose.position())})}})};
    }

    const ArmSide side = parse_arm_side(arm);
    const std::string frame = req.value("frame", std::string("shoulder"));
    if (frame != "shoulder" && frame != "neck") throw Error(ErrorCode::invalid_parameter, "frame must be shoulder or neck");
    const RigidTransform base = frame == "neck" ? workspace_.shoulders[side] : RigidTransform::identity();

    const JointVector joints(ChainKind::arm, values);
    const auto frames = arm_frames(config_.arm, joints);
    json origins = json::array();
    for (const auto& f : frames) origins.push_back(vec_to_json(apply(base, f.translation())));
    const Pose pose{base * frames.back()};
    return {200, versioned({{"arm", arm}, {"frame", frame}, {"pose", pose}, {"origins", origins}})};
}

Service::Response Service::post_ik(const json& req) const {
    const double scale = angle_scale(req);
    const ArmSide side = parse_arm_side(req.value("arm", std::string("right")));
    const std::string frame = req.value("frame", std::string("shoulder"));
    if (frame != "shoulder" && frame != "neck") throw Error(ErrorCode::invalid_parameter, "frame must be shoulder or neck");

    const json& target = req.contains("target") ? req.at("target") : req;
    const Vec3 position = vec_from_json(target.at("position"));
    const RigidTransform to_shoulder = frame == "neck" ? invert(workspace_.shoulders[side]) : RigidTransform::identity();

    IKResult result;
    if (target.contains("rotation")) {
        const Pose pose{RigidTransform(rotation_from_json(target.at("rotation")), position)};
        result = solve_full(config_.arm, Pose{to_shoulder * pose.transform}, config_.ik);
    } else {
        result = solve_position(config_.arm, apply(to_shoulder, position), config_.ik.init, config_.ik);
    }

    json body = versioned(json(result));
    body["units"] = scale == 1.0 ? "rad" : "deg";
    body["joints"] = scaled(std::vector<double>(result.joints.values().begin(), result.joints.values().end()), 1.0 / scale);
    if (!result.converged) {
        body["error"] = "unreachable";
        return {422, body};
    }
    return {200, body};
}

Service::Response Service::get_sweep(const std::map<std::string, std::string>& query) const {
    const double lo = query_number(query, "min", 0.0);
    const double hi = query_number(query, "max", config_.arm.link_budget());
    const double step = query_number(query, "step", 1.0);
    const SweepTable table = sweep_link_lengths(config_.arm, config_.motor, lo, hi, step);
    const FeasibilityReport report = feasibility_report(table, config_.arm, config_.motor);
    return {200, versioned({{"table", table}, {"report", report}})};
}

Service::Response Service::post_plan(const json& req) const {
    const Plan plan = plan_pick_place(config_.arm, workspace_, vec_from_json(req.at("object")),
                                      vec_from_json(req.at("goal")), config_.planner_options());
    const auto frames = playback_frames(plan, config_.planner.playback_steps);
    return {200, versioned({{"plan", plan}, {"frame_count", frames.size()}})};
}

Service::Response Service::post_localize(const json& req) const {
    CameraModel cam = config_.camera_model();
    if (req.contains("head_joints")) {
        const auto h = scaled(req.at("head_joints").get<std::vector<double>>(), angle_scale(req));
        cam.head_joints = JointVector(ChainKind::head, h);
    }
    const auto pixel = req.at("pixel").get<std::array<double, 2>>();
    const Vec3 p = back_project(cam, {pixel[0], pixel[1]}, req.at("depth").get<double>());
    return {200, versioned({{"position", vec_to_json(p)}, {"frame", "neck"}})};
}

std::shared_ptr<GameSession> Service::find_session(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::not_found, "no session '" + id + "'");
    return it->second;
}

std::optional<Plan> Service::plan_token_placement(int cell) const {
    try {
        return plan_pick_place(config_.arm, workspace_, config_.planner.token_supply,
                               cell_to_world(config_.board, cell), config_.planner_options());
    } catch (const Error&) {
        return std::nullopt;
    }
}

int Service::robot_reply(GameSession& session) {
    const int cell = best_move(session.board);
    session.board = step_game(session.board, cell, Token::x);
    session.history.push_back({cell, Token::x});
    session.last_plan = plan_token_placement(cell);
    journal({{"event", "move"}, {"session", session.id}, {"cell", cell}, {"token", "X"}});
    return cell;
}

json Service::session_json(const GameSession& s) const {
    json history = json::array();
    for (const auto& m : s.history) history.push_back({{"cell", m.cell}, {"token", std::string(to_string(m.token))}});
    return {{"session", s.id},
            {"board", s.board},
            {"status", std::string(to_string(s.board.status()))},
            {"ply", s.history.size()},
            {"history", history}};
}

Service::Response Service::post_game_new(const json& req) {
    const std::string first = req.value("first", std::string("human"));
    if (first != "human" && first != "robot") throw Error(ErrorCode::invalid_parameter, "first must be human or robot");

    auto session = std::make_shared<GameSession>();
    {
        std::lock_guard lock(sessions_mutex_);
        session->id = "s" + std::to_string(next_session_++);
        sessions_[session->id] = session;
    }
    std::lock_guard guard(session->guard);
    session->first = first == "human" ? Token::o : Token::x;
    session->board = BoardState::empty(session->first);
    journal({{"event", "new"}, {"session", session->id}, {"first", std::string(to_string(session->first))}});

    json body = session_json(*session);
    body["robot_cell"] = nullptr;
    body["plan"] = nullptr;
    if (session->first == Token::x) {
        body["robot_cell"] = robot_reply(*session);
        body["plan"] = session->last_plan ? json(*session->last_plan) : json(nullptr);
        body.update(session_json(*session));
    }
    return {200, versioned(body)};
}

Service::Response Service::post_game_move(const json& req) {
    const auto session = find_session(req.at("session").get<std::string>());
    const int cell = req.at("cell").get<int>();

    std::lock_guard guard(session->guard);
    if (req.contains("ply") && req.at("ply").get<std::size_t>() != session->history.size()) {
        throw Error(ErrorCode::turn_order, "stale move: session is at ply " + std::to_string(session->history.size()));
    }
    session->board = step_game(session->board, cell, Token::o);
    session->history.push_back({cell, Token::o});
    session->last_plan.reset();
    journal({{"event", "move"}, {"session", session->id}, {"cell", cell}, {"token", "O"}});

    json body = session_json(*session);
    body["human_cell"] = cell;
    body["robot_cell"] = nullptr;
    body["plan"] = nullptr;
    if (!session->board.over()) {
        body["robot_cell"] = robot_reply(*session);
        body["plan"] = session->last_plan ? json(*session->last_plan) : json(nullptr);
        body.update(session_json(*session));
    }
    return {200, versioned(body)};
}

Service::Response Service::get_game_state(const std::map<std::string, std::string>& query) {
    const auto it = query.find("session");
    if (it == query.end()) return error_response(400, "malformed_request", "missing session parameter");
    const auto session = find_session(it->second);
    std::lock_guard guard(session->guard);
    return {200, versioned(session_json(*session))};
}

std::vector<json> Service::session_frames(const std::string& session_id) {
    const auto session = find_session(session_id);
    std::lock_guard guard(session->guard);
    std::vector<json> out;
    if (!session->last_plan) return out;
    for (const auto& f : playback_frames(*session->last_plan, config_.planner.playback_steps)) {
        json j = f;
        j["session"] = session_id;
        out.push_back(std::move(j));
    }
    return out;
}

void Service::journal(const json& event) {
    if (!journal_path_) return;
    std::lock_guard lock(journal_mutex_);
    std::ofstream out(*journal_path_, std::ios::app);
    out << event.dump() << '\n';
}

void Service::load_journal() {
    std::ifstream in(*journal_path_);
    if (!in) return;  // first run
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json event;
        try {
            event = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::config_error, "journal line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string id = event.at("session").get<std::string>();
        if (event.at("event") == "new") {
            auto s = std::make_shared<GameSession>();
            s->id = id;
            s->first = parse_token(event.at("first").get<std::string>());
            s->board = BoardState::empty(s->first);
            sessions_[id] = s;
            if (id.size() > 1 && id[0] == 's') next_session_ = std::max(next_session_, std::stoi(id.substr(1)) + 1);
        } else {
            auto& s = sessions_.at(id);
            const MoveRecord m{event.at("cell").get<int>(), parse_token(event.at("token").get<std::string>())};
            s->board = step_game(s->board, m.cell, m.token);
            s->history.push_back(m);
            s->last_plan = m.token == Token::x ? plan_token_placement(m.cell) : std::nullopt;
        }
    }
}

void Service::mount(httplib::Server& server) {
    auto handle = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query[k] = v;
        const Response r = dispatch(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body.dump(), "application/json");
    };
    for (const char* path : {"/config", "/design/sweep", "/game/state"}) server.Get(path, handle);
    for (const char* path : {"/fk", "/ik", "/plan", "/localize", "/game/new", "/game/move"}) server.Post(path, handle);

    server.Get("/events", [this](const httplib::Request& req, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        std::vector<json> frames;
        try {
            frames = session_frames(req.get_param_value("session"));
        } catch (const Error& e) {
            res.status = 404;
            res.set_content(json{{"error", "not_found"}, {"message", e.what()}}.dump(), "application/json");
            return;
        }
        res.set_chunked_content_provider("text/event-stream", [frames](std::size_t, httplib::DataSink& sink) {
            for (const auto& f : frames) {
                const std::string chunk = "event: frame\ndata: " + f.dump() + "\n\n";
                if (!sink.write(chunk.data(), chunk.size())) return false;
            }
            const std::string end = "event: end\ndata: {}\n\n";
            sink.write(end.data(), end.size());
            sink.done();
            return true;
        });
    });
}

bool Service::serve(const std::string& host, int port) {
    httplib::Server server;
    mount(server);
    return server.listen(host, port);
}

}  // namespace twinarm

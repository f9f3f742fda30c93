#pragma once

#include "twinarm/config.hpp"

#include "json.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace twinarm {

struct MoveRecord {
    int cell = 0;
    Token token = Token::o;
};

/// One human-vs-robot game. The human plays O.
struct GameSession {
    std::string id;
    Token first = Token::o;
    BoardState board = BoardState::empty();
    std::vector<MoveRecord> history;
    std::optional<Plan> last_plan;
    std::mutex guard;  ///< serializes moves on this session
};

/// Replays `history` from an empty board with `first` to move.
BoardState replay(Token first, const std::vector<MoveRecord>& history);

/**
 * JSON-over-HTTP front end for every pipeline plus game sessions.
 *
 * dispatch() is the transport-independent core; mount() wires it into a
 * cpp-httplib server and adds the /events stream (server-sent events).
 */
class Service {
public:
    struct Response {
        int status = 200;
        nlohmann::json body;
    };

    explicit Service(RobotConfig config, std::optional<std::string> journal_path = std::nullopt);

    Response dispatch(const std::string& method, const std::string& path,
                      const std::map<std::string, std::string>& query, const std::string& body);

    /// Playback frames for a session's last plan, each tagged with the session id.
    std::vector<nlohmann::json> session_frames(const std::string& session_id);

    void mount(httplib::Server& server);
    /// Blocks serving on host:port. Returns false if the port could not be bound.
    bool serve(const std::string& host, int port);

    const RobotConfig& config() const { return config_; }

private:
    Response get_config() const;
    Response post_fk(const nlohmann::json& req) const;
    Response post_ik(const nlohmann::json& req) const;
    Response get_sweep(const std::map<std::string, std::string>& query) const;
    Response post_plan(const nlohmann::json& req) const;
    Response post_localize(const nlohmann::json& req) const;
    Response post_game_new(const nlohmann::json& req);
    Response post_game_move(const nlohmann::json& req);
    Response get_game_state(const std::map<std::string, std::string>& query);

    std::shared_ptr<GameSession> find_session(const std::string& id);
    /// Robot (X) reply on the session's board; records the move and its plan.
    int robot_reply(GameSession& session);
    std::optional<Plan> plan_token_placement(int cell) const;
    nlohmann::json session_json(const GameSession& session) const;
    void journal(const nlohmann::json& event);
    void load_journal();

    RobotConfig config_;
    WorkspaceModel workspace_;
    std::optional<std::string> journal_path_;
    std::mutex journal_mutex_;
    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<GameSession>> sessions_;
    int next_session_ = 1;
};

}  // namespace twinarm

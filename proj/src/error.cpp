#include "twinarm/error.hpp"

namespace twinarm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_parameter: return "invalid_parameter";
        case ErrorCode::joint_limit: return "joint_limit";
        case ErrorCode::no_depth: return "no_depth";
        case ErrorCode::invalid_camera: return "invalid_camera";
        case ErrorCode::behind_camera: return "behind_camera";
        case ErrorCode::degenerate_quad: return "degenerate_quad";
        case ErrorCode::infeasible_design: return "infeasible_design";
        case ErrorCode::unreachable_task: return "unreachable_task";
        case ErrorCode::planning_failure: return "planning_failure";
        case ErrorCode::no_handover_region: return "no_handover_region";
        case ErrorCode::game_over: return "game_over";
        case ErrorCode::illegal_move: return "illegal_move";
        case ErrorCode::turn_order: return "turn_order";
        case ErrorCode::off_board: return "off_board";
        case ErrorCode::cell_conflict: return "cell_conflict";
        case ErrorCode::inconsistent_board: return "inconsistent_board";
        case ErrorCode::config_error: return "config_error";
        case ErrorCode::not_found: return "not_found";
    }
    return "unknown";
}

}  // namespace twinarm

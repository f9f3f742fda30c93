#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinarm {

/// Domain error categories. Names are stable: the service and CLI report them verbatim.
enum class ErrorCode {
    invalid_parameter,
    joint_limit,
    no_depth,
    invalid_camera,
    behind_camera,
    degenerate_quad,
    infeasible_design,
    unreachable_task,
    planning_failure,
    no_handover_region,
    game_over,
    illegal_move,
    turn_order,
    off_board,
    cell_conflict,
    inconsistent_board,
    config_error,
    not_found,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace twinarm

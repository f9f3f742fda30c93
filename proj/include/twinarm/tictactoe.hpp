#pragma once

// Tic-Tac-Toe engine and board geometry. The human plays O, the robot plays X.
// Cells are indexed row-major 0..8 from the board-frame origin corner.

#include "twinarm/transforms.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace twinarm {

enum class Token { x, o };
enum class Cell { empty, x, o };
enum class GameStatus { in_progress, x_won, o_won, draw };

std::string_view to_string(Token token);
std::string_view to_string(GameStatus status);
Token parse_token(std::string_view text);
Token opponent(Token token);

class BoardState {
public:
    /// Empty board with `first` to move.
    static BoardState empty(Token first = Token::o);
    /// Throws inconsistent_board if the cells and side to move cannot arise in play.
    static BoardState from_cells(const std::array<Cell, 9>& cells, Token side_to_move);

    Cell at(int index) const { return cells_[static_cast<std::size_t>(index)]; }
    const std::array<Cell, 9>& cells() const { return cells_; }
    Token side_to_move() const { return side_to_move_; }
    int count(Token token) const;
    GameStatus status() const;
    bool over() const { return status() != GameStatus::in_progress; }
    std::optional<Token> winner() const;

    /// Three lines of `X|O|.`-style text, cell indices shown for empty cells.
    std::string render() const;

    friend bool operator==(const BoardState&, const BoardState&) = default;

private:
    BoardState(const std::array<Cell, 9>& cells, Token side) : cells_(cells), side_to_move_(side) {}

    std::array<Cell, 9> cells_{};
    Token side_to_move_ = Token::o;
};

/**
 * Minimax-optimal move for the side to move.
 *
 * Quicker wins score higher and slower losses are preferred; among equal
 * scores the lowest index wins. Throws game_over on a finished board.
 */
int best_move(const BoardState& board);

/// Places `token` at `cell`. Throws illegal_move, turn_order or game_over.
BoardState step_game(const BoardState& board, int cell, Token token);

struct BoardGeometry {
    double width = 42.0;        ///< along board-frame x, cm
    double height = 29.7;       ///< along board-frame y, cm
    double cell_width = 13.0;
    double cell_height = 9.0;
    RigidTransform board_pose = default_pose();  ///< board frame -> neck-base frame

    double margin_width() const { return (width - 3 * cell_width) / 2; }
    double margin_height() const { return (height - 3 * cell_height) / 2; }
    void validate() const;

    /// Horizontal board 4 cm below shoulder height, near edge 5 cm ahead of the shoulders,
    /// long side spanning y in [-21, 21].
    static RigidTransform default_pose();
};

/// Centre of `cell` in the neck-base frame.
Vec3 cell_to_world(const BoardGeometry& geometry, int cell);

struct TokenObservation {
    std::string label;  ///< "X" or "O"
    Vec3 position;      ///< neck-base frame
};

/**
 * Rebuilds a board from localized tokens. Tokens must lie within 2 cm of the
 * board plane and inside its outline. With equal token counts `first` is to move.
 */
BoardState board_from_detections(const BoardGeometry& geometry, std::span<const TokenObservation> tokens,
                                 Token first = Token::o);

}  // namespace twinarm

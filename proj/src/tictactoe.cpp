#include "twinarm/tictactoe.hpp"

#include "twinarm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace twinarm {

namespace {

constexpr std::array<std::array<int, 3>, 8> kLines{{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8},
    {0, 3, 6}, {1, 4, 7}, {2, 5, 8},
    {0, 4, 8}, {2, 4, 6},
}};

constexpr double kPlaneTolerance = 2.0;

Cell cell_of(Token t) { return t == Token::x ? Cell::x : Cell::o; }

bool has_line(const std::array<Cell, 9>& cells, Cell c) {
    for (const auto& line : kLines) {
        if (cells[line[0]] == c && cells[line[1]] == c && cells[line[2]] == c) return true;
    }
    return false;
}

int encode(const std::array<Cell, 9>& cells) {
    int code = 0;
    for (Cell c : cells) code = code * 3 + static_cast<int>(c);
    return code;
}

// Negamax from the mover's point of view. A loss with k empty cells left
// scores -(1 + k), so faster wins and slower losses rank higher.
class Solver {
public:
    int value(std::array<Cell, 9>& cells, Token mover) {
        const int key = encode(cells);
        if (memo_[static_cast<std::size_t>(key)] != kUnknown) return memo_[static_cast<std::size_t>(key)];

        int empties = 0;
        for (Cell c : cells) empties += c == Cell::empty;
        int result;
        if (has_line(cells, cell_of(opponent(mover)))) {
            result = -(1 + empties);
        } else if (empties == 0) {
            result = 0;
        } else {
            result = std::numeric_limits<int>::min();
            for (int i = 0; i < 9; ++i) {
                if (cells[i] != Cell::empty) continue;
                cells[i] = cell_of(mover);
                result = std::max(result, -value(cells, opponent(mover)));
                cells[i] = Cell::empty;
            }
        }
        memo_[static_cast<std::size_t>(key)] = static_cast<std::int8_t>(result);
        return result;
    }

private:
    static constexpr std::int8_t kUnknown = std::numeric_limits<std::int8_t>::min();
    std::vector<std::int8_t> memo_ = std::vector<std::int8_t>(19683, kUnknown);
};

}  // namespace

std::string_view to_string(Token token) { return token == Token::x ? "X" : "O"; }

std::string_view to_string(GameStatus status) {
    switch (status) {
        case GameStatus::in_progress: return "in_progress";
        case GameStatus::x_won: return "x_won";
        case GameStatus::o_won: return "o_won";
        case GameStatus::draw: return "draw";
    }
    return "in_progress";
}

Token parse_token(std::string_view text) {
    if (text == "X" || text == "x") return Token::x;
    if (text == "O" || text == "o") return Token::o;
    throw Error(ErrorCode::invalid_parameter, "token must be X or O, got '" + std::string(text) + "'");
}

Token opponent(Token token) { return token == Token::x ? Token::o : Token::x; }

BoardState BoardState::empty(Token first) {
    std::array<Cell, 9> cells;
    cells.fill(Cell::empty);
    return BoardState(cells, first);
}

BoardState BoardState::from_cells(const std::array<Cell, 9>& cells, Token side_to_move) {
    BoardState b(cells, side_to_move);
    const int nx = b.count(Token::x);
    const int no = b.count(Token::o);
    if (std::abs(nx - no) > 1) {
        throw Error(ErrorCode::inconsistent_board, "token counts differ by more than one");
    }
    if ((nx > no && side_to_move != Token::o) || (no > nx && side_to_move != Token::x)) {
        throw Error(ErrorCode::inconsistent_board, "side to move does not match token counts");
    }
    const bool x_line = has_line(cells, Cell::x);
    const bool o_line = has_line(cells, Cell::o);
    if (x_line && o_line) throw Error(ErrorCode::inconsistent_board, "both sides have a line");
    if ((x_line && side_to_move == Token::x) || (o_line && side_to_move == Token::o)) {
        throw Error(ErrorCode::inconsistent_board, "winner cannot be the side to move");
    }
    return b;
}

int BoardState::count(Token token) const {
    int n = 0;
    for (Cell c : cells_) n += c == cell_of(token);
    return n;
}

std::optional<Token> BoardState::winner() const {
    if (has_line(cells_, Cell::x)) return Token::x;
    if (has_line(cells_, Cell::o)) return Token::o;
    return std::nullopt;
}

GameStatus BoardState::status() const {
    if (const auto w = winner()) return *w == Token::x ? GameStatus::x_won : GameStatus::o_won;
    for (Cell c : cells_) {
        if (c == Cell::empty) return GameStatus::in_progress;
    }
    return GameStatus::draw;
}

std::string BoardState::render() const {
    std::string out;
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
            const int i = row * 3 + col;
            if (col) out += " | ";
            switch (cells_[i]) {
                case Cell::x: out += 'X'; break;
                case Cell::o: out += 'O'; break;
                case Cell::empty: out += static_cast<char>('0' + i); break;
            }
        }
        out += '\n';
        if (row < 2) out += "--+---+--\n";
    }
    return out;
}

int best_move(const BoardState& board) {
    if (board.over()) throw Error(ErrorCode::game_over, "game is already decided");
    Solver solver;
    std::array<Cell, 9> cells = board.cells();
    const Token mover = board.side_to_move();
    int best = -1;
    int best_score = std::numeric_limits<int>::min();
    for (int i = 0; i < 9; ++i) {
        if (cells[i] != Cell::empty) continue;
        cells[i] = cell_of(mover);
        const int score = -solver.value(cells, opponent(mover));
        cells[i] = Cell::empty;
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

BoardState step_game(const BoardState& board, int cell, Token token) {
    if (cell < 0 || cell > 8) throw Error(ErrorCode::invalid_parameter, "cell must lie in 0..8");
    if (board.over()) throw Error(ErrorCode::game_over, "game is already decided");
    if (token != board.side_to_move()) {
        throw Error(ErrorCode::turn_order, std::string(to_string(board.side_to_move())) + " is to move");
    }
    if (board.at(cell) != Cell::empty) {
        throw Error(ErrorCode::illegal_move, "cell " + std::to_string(cell) + " is occupied");
    }
    std::array<Cell, 9> cells = board.cells();
    cells[static_cast<std::size_t>(cell)] = cell_of(token);
    return BoardState::from_cells(cells, opponent(token));
}

void BoardGeometry::validate() const {
    if (!(cell_width > 0.0 && cell_height > 0.0 && 3 * cell_width <= width && 3 * cell_height <= height)) {
        throw Error(ErrorCode::invalid_parameter, "three cells must fit on the board in each direction");
    }
}

RigidTransform BoardGeometry::default_pose() {
    Mat3 r;
    r << 0, 1, 0,
        -1, 0, 0,
         0, 0, 1;
    return RigidTransform(r, Vec3(5.0, 21.0, -50.0));
}

Vec3 cell_to_world(const BoardGeometry& geometry, int cell) {
    if (cell < 0 || cell > 8) throw Error(ErrorCode::invalid_parameter, "cell must lie in 0..8");
    const int row = cell / 3;
    const int col = cell % 3;
    const Vec3 local(geometry.margin_width() + (col + 0.5) * geometry.cell_width,
                     geometry.margin_height() + (row + 0.5) * geometry.cell_height, 0.0);
    return apply(geometry.board_pose, local);
}

BoardState board_from_detections(const BoardGeometry& geometry, std::span<const TokenObservation> tokens,
                                 Token first) {
    const RigidTransform to_board = invert(geometry.board_pose);
    std::array<Cell, 9> cells;
    cells.fill(Cell::empty);
    for (const auto& t : tokens) {
        const Token token = parse_token(t.label);
        const Vec3 local = apply(to_board, t.position);
        if (std::abs(local.z()) > kPlaneTolerance || local.x() < 0.0 || local.x() > geometry.width ||
            local.y() < 0.0 || local.y() > geometry.height) {
            throw Error(ErrorCode::off_board, t.label + " token is off the board");
        }
        int nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 9; ++i) {
            const double d = (apply(to_board, cell_to_world(geometry, i)) - local).head<2>().norm();
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        if (cells[static_cast<std::size_t>(nearest)] != Cell::empty) {
            throw Error(ErrorCode::cell_conflict, "two tokens in cell " + std::to_string(nearest));
        }
        cells[static_cast<std::size_t>(nearest)] = cell_of(token);
    }
    const int nx = static_cast<int>(std::count(cells.begin(), cells.end(), Cell::x));
    const int no = static_cast<int>(std::count(cells.begin(), cells.end(), Cell::o));
    const Token side = nx == no ? first : (nx > no ? Token::o : Token::x);
    return BoardState::from_cells(cells, side);
}

}  // namespace twinarm

#include "mctslab/domains/board_games.hpp"

#include <bit>

namespace mctslab::domains {

// ---------------------------------------------------------------- tictactoe

namespace {

constexpr int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                              {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};

// 0 empty, 1 player 0, 2 player 1
int ttt_winner(const StateKey& key) {
    for (const auto& line : kLines) {
        std::uint8_t a = key.bytes[static_cast<std::size_t>(line[0])];
        if (a != 0 && a == key.bytes[static_cast<std::size_t>(line[1])] &&
            a == key.bytes[static_cast<std::size_t>(line[2])])
            return a;
    }
    return 0;
}

int ttt_stones(const StateKey& key) {
    int n = 0;
    for (int i = 0; i < 9; ++i)
        n += key.bytes[static_cast<std::size_t>(i)] != 0;
    return n;
}

}  // namespace

TicTacToe::TicTacToe() {
    descriptor_.horizon = 100;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 2;
    descriptor_.domain_name = "tictactoe";
}

EnvState TicTacToe::initial_state() const {
    EnvState s;
    for (int i = 0; i < 9; ++i)
        s.key.push(0);
    return s;
}

int TicTacToe::num_actions(const EnvState& state) const {
    if (state.terminal)
        return 0;
    return 9 - ttt_stones(state.key);
}

int TicTacToe::cell_of_action(const EnvState& state, ActionIndex action) const {
    int seen = 0;
    for (int i = 0; i < 9; ++i) {
        if (state.key.bytes[static_cast<std::size_t>(i)] == 0 && seen++ == action)
            return i;
    }
    throw IllegalAction("tictactoe: action out of range");
}

EnvState TicTacToe::apply(const EnvState& state, ActionIndex action) const {
    EnvState next = state;
    int cell = cell_of_action(state, action);
    next.key.bytes[static_cast<std::size_t>(cell)] =
        static_cast<std::uint8_t>(state.player_to_move + 1);
    next.player_to_move = static_cast<std::uint8_t>(1 - state.player_to_move);
    next.terminal = ttt_winner(next.key) != 0 || ttt_stones(next.key) == 9;
    if (next.terminal)
        next.player_to_move = 0;
    return next;
}

double TicTacToe::terminal_value(const EnvState& state) {
    int w = ttt_winner(state.key);
    return w == 1 ? 1.0 : w == 2 ? -1.0 : 0.0;
}

double TicTacToe::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    EnvState next = apply(state, action);
    return next.terminal ? terminal_value(next) : 0.0;
}

std::vector<TransitionEntry> TicTacToe::transitions(const EnvState& state,
                                                    ActionIndex action) const {
    check_action(state, action);
    return {{apply(state, action), 1.0}};
}

std::string TicTacToe::action_name(const EnvState& state, ActionIndex action) const {
    int cell = cell_of_action(state, action);
    return "cell" + std::to_string(cell);
}

std::unique_ptr<Mdp> build_tictactoe() { return std::make_unique<TicTacToe>(); }

// ---------------------------------------------------------------- connect 4

namespace {

// bitboard with 7 bits per column (6 playable + sentinel), column-major
constexpr int kCols = 7;
constexpr int kRows = 6;

std::uint64_t c4_board(const StateKey& key, int player) {
    std::uint64_t b = 0;
    for (int i = 0; i < 8; ++i)
        b |= static_cast<std::uint64_t>(key.bytes[static_cast<std::size_t>(8 * player + i)])
             << (8 * i);
    return b;
}

bool c4_wins(std::uint64_t b) {
    for (int shift : {1, 7, 6, 8}) {
        std::uint64_t m = b & (b >> shift);
        if (m & (m >> (2 * shift)))
            return true;
    }
    return false;
}

int c4_height(std::uint64_t occupied, int col) {
    return std::popcount((occupied >> (7 * col)) & 0x3full);
}

}  // namespace

Connect4::Connect4() {
    descriptor_.horizon = 100;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 2;
    descriptor_.domain_name = "connect4";
}

EnvState Connect4::initial_state() const {
    EnvState s;
    for (int i = 0; i < 16; ++i)
        s.key.push(0);
    return s;
}

int Connect4::num_actions(const EnvState& state) const {
    if (state.terminal)
        return 0;
    std::uint64_t occupied = c4_board(state.key, 0) | c4_board(state.key, 1);
    int n = 0;
    for (int c = 0; c < kCols; ++c)
        n += c4_height(occupied, c) < kRows;
    return n;
}

int Connect4::column_of_action(const EnvState& state, ActionIndex action) const {
    std::uint64_t occupied = c4_board(state.key, 0) | c4_board(state.key, 1);
    int seen = 0;
    for (int c = 0; c < kCols; ++c) {
        if (c4_height(occupied, c) < kRows && seen++ == action)
            return c;
    }
    throw IllegalAction("connect4: action out of range");
}

EnvState Connect4::apply(const EnvState& state, ActionIndex action) const {
    int col = column_of_action(state, action);
    std::uint64_t mine = c4_board(state.key, state.player_to_move);
    std::uint64_t other = c4_board(state.key, 1 - state.player_to_move);
    std::uint64_t occupied = mine | other;
    mine |= 1ull << (7 * col + c4_height(occupied, col));

    EnvState next;
    std::uint64_t p0 = state.player_to_move == 0 ? mine : other;
    std::uint64_t p1 = state.player_to_move == 0 ? other : mine;
    next.key.push_u64(p0);
    next.key.push_u64(p1);
    next.player_to_move = static_cast<std::uint8_t>(1 - state.player_to_move);
    next.terminal = c4_wins(mine) || std::popcount(p0 | p1) == kCols * kRows;
    if (next.terminal)
        next.player_to_move = 0;
    return next;
}

double Connect4::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    EnvState next = apply(state, action);
    if (!next.terminal)
        return 0.0;
    if (c4_wins(c4_board(next.key, 0)))
        return 1.0;
    if (c4_wins(c4_board(next.key, 1)))
        return -1.0;
    return 0.0;
}

std::vector<TransitionEntry> Connect4::transitions(const EnvState& state,
                                                   ActionIndex action) const {
    check_action(state, action);
    return {{apply(state, action), 1.0}};
}

std::string Connect4::action_name(const EnvState& state, ActionIndex action) const {
    return "col" + std::to_string(column_of_action(state, action));
}

std::unique_ptr<Mdp> build_connect4() { return std::make_unique<Connect4>(); }

}  // namespace mctslab::domains

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace momkit {

// One typed move with its integer parameters, e.g. {"m2", {v, e, e'}}.
struct Move {
  std::string kind;
  std::vector<int> params;
  friend bool operator==(const Move&, const Move&) = default;
};

// Replayable move sequence; one move per line, "<kind> <params...>".
struct MoveTrace {
  std::vector<Move> moves;
  bool empty() const { return moves.empty(); }
  size_t size() const { return moves.size(); }
  void push(std::string kind, std::vector<int> params) { moves.push_back({std::move(kind), std::move(params)}); }
  void append(const MoveTrace& other) { moves.insert(moves.end(), other.moves.begin(), other.moves.end()); }
  friend bool operator==(const MoveTrace&, const MoveTrace&) = default;
};

MoveTrace parse_trace(std::string_view text);
std::string format_trace(const MoveTrace& trace);
std::string format_move(const Move& m);

}  // namespace momkit

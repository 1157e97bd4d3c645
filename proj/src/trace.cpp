#include "momkit/trace.hpp"

#include <sstream>

#include "momkit/text.hpp"

namespace momkit {

MoveTrace parse_trace(std::string_view input) {
  MoveTrace t;
  for (const auto& line : text::tokenize(input)) {
    Move m{line.tokens[0], {}};
    for (size_t i = 1; i < line.tokens.size(); ++i) m.params.push_back(text::to_int(line.tokens[i], line));
    t.moves.push_back(std::move(m));
  }
  return t;
}

std::string format_move(const Move& m) {
  std::ostringstream out;
  out << m.kind;
  for (int p : m.params) out << " " << p;
  return out.str();
}

std::string format_trace(const MoveTrace& trace) {
  std::string out;
  for (const auto& m : trace.moves) out += format_move(m) + "\n";
  return out;
}

}  // namespace momkit

#include "momkit/text.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "momkit/error.hpp"

namespace momkit::text {

std::vector<Line> tokenize(std::string_view input) {
  std::vector<Line> out;
  std::istringstream in{std::string(input)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line;
    line.number = number;
    for (std::string w; words >> w;) line.tokens.push_back(w);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

int to_int(const std::string& token, const Line& line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail_parse("line " + std::to_string(line.number) + ": expected integer, got '" + token + "'");
  return value;
}

std::pair<int, int> to_pair(const std::string& token, const Line& line) {
  auto dot = token.find('.');
  if (dot == std::string::npos)
    fail_parse("line " + std::to_string(line.number) + ": expected a.b, got '" + token + "'");
  return {to_int(token.substr(0, dot), line), to_int(token.substr(dot + 1), line)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_parse("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace momkit::text

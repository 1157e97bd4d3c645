#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace momkit::text {

// One non-empty input line split on whitespace, with '#' comments removed.
struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view input);

int to_int(const std::string& token, const Line& line);

// Parses "a.b" into two integers.
std::pair<int, int> to_pair(const std::string& token, const Line& line);

std::string read_file(const std::string& path);

}  // namespace momkit::text

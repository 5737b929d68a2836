#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tlx {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat "key = value" lines; '#' starts a comment; keys may repeat.
KeyValues parse_key_values(std::string_view text, const std::string& origin = "<input>");

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace tlx

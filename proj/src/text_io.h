#ifndef AMI_SRC_TEXT_IO_H_
#define AMI_SRC_TEXT_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ami::io {

// Whole file as bytes; DataError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);
// Error if the path cannot be written.
void write_file(const std::filesystem::path& path, std::string_view content);

// Splits on LF, dropping one trailing CR per line. A final empty line after the
// last LF is not returned.
std::vector<std::string_view> split_lines(std::string_view content);
std::vector<std::string_view> split(std::string_view s, char sep);
// Splits on runs of ASCII spaces/tabs, dropping empty fields.
std::vector<std::string_view> split_ws(std::string_view s);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

std::string location(const std::filesystem::path& path, std::size_t line);

}  // namespace ami::io

#endif  // AMI_SRC_TEXT_IO_H_

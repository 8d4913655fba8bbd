#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace frost::detail
{
struct CsvRow
{
    std::size_t line = 0;  // 1-based line in the source document
    std::vector<double> values;
};

/// Numeric CSV with a fixed header. Blank lines are skipped. Throws
/// ParseError naming the offending line.
std::vector<CsvRow> parse_csv(std::string_view text,
                              std::initializer_list<std::string_view> header);

/// Throws IoError.
std::string read_text_file(std::filesystem::path const& path);

}  // namespace frost::detail

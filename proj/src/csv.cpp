#include "csv.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "frost/error.hpp"

namespace frost::detail
{
namespace
{
std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true)
    {
        auto const comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
        {
            return fields;
        }
        start = comma + 1;
    }
}
}  // namespace

std::vector<CsvRow> parse_csv(std::string_view text,
                              std::initializer_list<std::string_view> header)
{
    std::vector<CsvRow> rows;
    bool header_seen = false;
    std::size_t line_number = 0;
    std::size_t position = 0;
    while (position < text.size())
    {
        auto end = text.find('\n', position);
        if (end == std::string_view::npos)
        {
            end = text.size();
        }
        auto const line = trim(text.substr(position, end - position));
        position = end + 1;
        ++line_number;
        if (line.empty())
        {
            continue;
        }
        auto const fields = split(line);
        if (!header_seen)
        {
            bool matches = fields.size() == header.size();
            std::size_t i = 0;
            for (auto const& name : header)
            {
                matches = matches && fields[i++] == name;
            }
            if (!matches)
            {
                std::string expected;
                for (auto const& name : header)
                {
                    expected += (expected.empty() ? "" : ",") + std::string(name);
                }
                throw ParseError(line_number,
                                 "expected CSV header '" + expected + "'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != header.size())
        {
            throw ParseError(line_number,
                             fmt::format("expected {} columns, got {}",
                                         header.size(), fields.size()));
        }
        CsvRow row{line_number, {}};
        for (auto const field : fields)
        {
            std::string const s(field);
            std::size_t consumed = 0;
            double value = 0.0;
            try
            {
                value = std::stod(s, &consumed);
            }
            catch (std::exception const&)
            {
                consumed = 0;
            }
            if (s.empty() || consumed != s.size())
            {
                throw ParseError(line_number, "not a number: '" + s + "'");
            }
            row.values.push_back(value);
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen)
    {
        throw ParseError(line_number, "empty CSV document");
    }
    return rows;
}

std::string read_text_file(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace frost::detail

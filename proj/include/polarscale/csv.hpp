#pragma once

// Minimal RFC 4180 writer: fields with a comma, quote or line break are quoted.

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace polarscale {

inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            os << ',';
        os << csv_field(fields[i]);
    }
    os << '\n';
}

} // namespace polarscale

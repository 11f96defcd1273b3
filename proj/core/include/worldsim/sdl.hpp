#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace worldsim::sdl {

// Line-oriented block format used by every structured text file in this
// project (model definitions, parameter registry, pathways, indicator
// catalogs, target sets):
//
//   # comment
//   kind name {
//     key = value        # value runs to end of line
//     knots = (0, 0) (10, 100)
//   }
//
// Sections may omit the name ("meta { ... }"); values are kept verbatim and
// interpreted by the consumer.
struct Block {
    std::string kind;
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    int line = 0;

    [[nodiscard]] bool has(const std::string& key) const;
    // Throws ParseError when the key is absent.
    [[nodiscard]] const std::string& get(const std::string& key) const;
    [[nodiscard]] std::string get_or(const std::string& key, std::string fallback) const;
    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] std::optional<double> maybe_double(const std::string& key) const;
};

struct Document {
    std::string origin;
    std::vector<Block> blocks;
};

Document parse_string(const std::string& text, const std::string& origin);
Document parse_file(const std::string& path);

// "(x1, y1) (x2, y2) ..." -> knot list.
std::vector<std::pair<double, double>> parse_knots(const std::string& text);

// "[lo, hi]" -> pair.
std::pair<double, double> parse_range(const std::string& text);

double parse_double(const std::string& text);

std::string trim(const std::string& s);

} // namespace worldsim::sdl

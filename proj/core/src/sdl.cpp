#include "worldsim/sdl.hpp"

#include "worldsim/errors.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace worldsim::sdl {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ParseError("not a number: '" + t + "'");
    }
    return v;
}

bool Block::has(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return true;
    }
    return false;
}

const std::string& Block::get(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    throw ParseError("block '" + kind + (name.empty() ? "" : " " + name) +
                     "' (line " + std::to_string(line) + "): missing key '" + key + "'");
}

std::string Block::get_or(const std::string& key, std::string fallback) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    return fallback;
}

double Block::get_double(const std::string& key) const {
    try {
        return parse_double(get(key));
    } catch (const ParseError& e) {
        throw ParseError("block '" + kind + " " + name + "', key '" + key + "': " + e.what());
    }
}

std::optional<double> Block::maybe_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key);
}

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    if (pos == std::string::npos) return line;
    return line.substr(0, pos);
}

} // namespace

Document parse_string(const std::string& text, const std::string& origin) {
    Document doc;
    doc.origin = origin;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    Block* open = nullptr;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (open == nullptr) {
            if (line.back() != '{') {
                throw ParseError(origin + ":" + std::to_string(lineno) +
                                 ": expected 'kind [name] {', got '" + line + "'");
            }
            std::istringstream head(line.substr(0, line.size() - 1));
            Block b;
            b.line = lineno;
            head >> b.kind >> b.name;
            if (b.kind.empty()) {
                throw ParseError(origin + ":" + std::to_string(lineno) + ": block without a kind");
            }
            doc.blocks.push_back(std::move(b));
            open = &doc.blocks.back();
        } else if (line == "}") {
            open = nullptr;
        } else {
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ParseError(origin + ":" + std::to_string(lineno) +
                                 ": expected 'key = value' inside block, got '" + line + "'");
            }
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
            }
            open->entries.emplace_back(std::move(key), std::move(value));
        }
    }
    if (open != nullptr) {
        throw ParseError(origin + ": unterminated block '" + open->kind + " " + open->name +
                         "' opened at line " + std::to_string(open->line));
    }
    return doc;
}

Document parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

std::vector<std::pair<double, double>> parse_knots(const std::string& text) {
    std::vector<std::pair<double, double>> knots;
    size_t i = 0;
    const std::string t = trim(text);
    while (i < t.size()) {
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
        if (i >= t.size()) break;
        if (t[i] != '(') throw ParseError("knot list: expected '(' in '" + t + "'");
        auto close = t.find(')', i);
        if (close == std::string::npos) throw ParseError("knot list: missing ')' in '" + t + "'");
        std::string body = t.substr(i + 1, close - i - 1);
        auto comma = body.find(',');
        if (comma == std::string::npos) throw ParseError("knot list: expected '(x, y)' in '" + t + "'");
        knots.emplace_back(parse_double(body.substr(0, comma)), parse_double(body.substr(comma + 1)));
        i = close + 1;
    }
    if (knots.empty()) throw ParseError("knot list: empty");
    return knots;
}

std::pair<double, double> parse_range(const std::string& text) {
    const std::string t = trim(text);
    if (t.size() < 5 || t.front() != '[' || t.back() != ']') {
        throw ParseError("range: expected '[lo, hi]', got '" + t + "'");
    }
    std::string body = t.substr(1, t.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string::npos) throw ParseError("range: expected '[lo, hi]', got '" + t + "'");
    return {parse_double(body.substr(0, comma)), parse_double(body.substr(comma + 1))};
}

} // namespace worldsim::sdl

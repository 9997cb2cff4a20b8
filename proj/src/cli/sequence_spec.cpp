#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rwvd/cli.hpp"
#include "rwvd/errors.hpp"

namespace rwvd::cli {

namespace {

[[noreturn]] void fail(std::string_view text, std::size_t pos, const std::string& what) {
    const std::size_t end = std::min(text.size(), text.find_first_of(" ^()", pos + 1));
    const auto token = text.substr(pos, end > pos ? end - pos : 1);
    throw ParseError("sequence spec \"" + std::string(text) + "\": " + what + " at position " +
                     std::to_string(pos) + " (token \"" + std::string(token) + "\")");
}

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(std::string_view lit) {
        skip_space();
        if (text_.substr(pos_, lit.size()) != lit) return false;
        pos_ += lit.size();
        return true;
    }
    void expect(std::string_view lit) {
        if (!eat(lit)) fail(text_, std::min(pos_, text_.size() - 1), "expected \"" + std::string(lit) + "\"");
    }
    // Signed decimal number; returns it with the position where it started.
    std::pair<double, std::size_t> number() {
        skip_space();
        const std::size_t start = pos_;
        double v = 0.0;
        const auto* first = text_.data() + pos_;
        const auto* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr == first) fail(text_, std::min(start, text_.size() - 1), "expected a number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return {v, start};
    }
    void finish() {
        skip_space();
        if (pos_ != text_.size()) fail(text_, pos_, "unexpected trailing input");
    }
    std::size_t pos() const { return pos_; }
    bool at_end() {
        skip_space();
        return pos_ == text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

Sequence list_sequence(std::vector<std::uint64_t> values, const std::string& desc) {
    return Sequence::from_values(std::move(values), desc);
}

}  // namespace

std::vector<std::uint64_t> read_integer_file(const std::string& path, const SequenceRules& rules) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sequence file \"" + path + "\"");
    std::vector<std::uint64_t> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        const std::string_view tok(line.data() + b, e - b + 1);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": \"" + std::string(tok) +
                             "\" is not a non-negative integer");
        if (v < rules.min_value)
            throw ParseError(path + ":" + std::to_string(lineno) + ": value " + std::to_string(v) +
                             " is below the minimum " + std::to_string(rules.min_value));
        if (rules.strictly_increasing && !values.empty() && v <= values.back())
            throw ParseError(path + ":" + std::to_string(lineno) + ": values must be strictly increasing");
        values.push_back(v);
    }
    if (values.empty()) throw ParseError(path + ": no values");
    return values;
}

Sequence parse_sequence_spec(std::string_view text, const SequenceRules& rules) {
    const std::string desc(text);
    if (text.empty()) throw ParseError("sequence spec is empty");
    Cursor cur(text);
    if (cur.eat("@")) {
        const auto path = std::string(text.substr(cur.pos()));
        if (path.empty()) fail(text, 0, "missing file name after '@'");
        return list_sequence(read_integer_file(path, rules), desc);
    }
    auto check_rules = [&](std::size_t pos, bool increasing, double first) {
        if (rules.strictly_increasing && !increasing) fail(text, pos, "sequence must be strictly increasing");
        if (first < static_cast<double>(rules.min_value))
            fail(text, pos, "first value " + std::to_string(first) + " is below the minimum " +
                                std::to_string(rules.min_value));
    };
    if (cur.eat("(")) {
        cur.expect("log");
        cur.expect("n");
        cur.expect(")");
        cur.expect("^");
        const auto [p, at] = cur.number();
        cur.finish();
        if (!(p > 0.0) || !std::isfinite(p)) fail(text, at, "exponent must be positive");
        check_rules(at, false, 1.0);
        return Sequence(desc, [p](std::uint64_t n) {
            return std::max(1.0, std::ceil(std::pow(std::log(static_cast<double>(n)), p)));
        });
    }
    if (cur.peek() == 'n') {
        cur.expect("n");
        if (cur.at_end()) {
            check_rules(0, true, 1.0);
            return Sequence(desc, [](std::uint64_t n) { return static_cast<double>(n); });
        }
        cur.expect("^");
        const auto [p, at] = cur.number();
        cur.finish();
        if (!(p > 0.0) || !std::isfinite(p)) fail(text, at, "exponent must be positive (values would not be positive integers)");
        check_rules(at, true, 1.0);
        return Sequence(desc, [p](std::uint64_t n) { return std::ceil(std::pow(static_cast<double>(n), p)); });
    }
    const auto [base, at] = cur.number();
    if (cur.at_end()) {
        if (!(base >= 1.0) || base != std::floor(base)) fail(text, at, "constant must be a positive integer");
        check_rules(at, false, base);
        return Sequence(desc, [base](std::uint64_t) { return base; });
    }
    cur.expect("^");
    cur.expect("n");
    cur.finish();
    if (!(base >= 2.0) || base != std::floor(base)) fail(text, at, "base must be an integer >= 2");
    check_rules(at, true, base);
    return Sequence(desc, [base](std::uint64_t n) { return std::pow(base, static_cast<double>(n)); });
}

std::vector<ConfigSection> parse_config(std::string_view text) {
    std::vector<ConfigSection> sections;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        const auto where = "config line " + std::to_string(lineno);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) throw ParseError(where + ": malformed section header");
            auto name = trim(t.substr(1, t.size() - 2));
            for (const auto& s : sections)
                if (s.name == name) throw ParseError(where + ": duplicate section [" + name + "]");
            sections.push_back({name, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
        if (sections.empty()) throw ParseError(where + ": key outside of any [section]");
        auto key = trim(t.substr(0, eq));
        auto value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError(where + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        auto& entries = sections.back().entries;
        for (const auto& [k, v] : entries)
            if (k == key) throw ParseError(where + ": duplicate key \"" + key + "\"");
        entries.emplace_back(std::move(key), std::move(value));
    }
    return sections;
}

}  // namespace rwvd::cli

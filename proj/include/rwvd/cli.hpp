#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwvd/schedules.hpp"
#include "rwvd/sequence.hpp"

namespace rwvd::cli {

// Runs one command line (without the program name). Exit codes: 0 success,
// 1 runtime failure, 2 configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SequenceRules {
    bool strictly_increasing = false;
    std::uint64_t min_value = 1;
};

// Integer sequence from a spec string:
//   "7"            constant
//   "n^p"          ceil(n^p), p > 0
//   "B^n"          B^n, integer B >= 2
//   "(log n)^p"    ceil((log n)^p), at least 1
//   "@path"        one integer per line
// Throws ParseError naming the offending token and its position.
Sequence parse_sequence_spec(std::string_view text, const SequenceRules& rules = {});

// Integers, one per line; blank lines and lines starting with '#' are skipped.
std::vector<std::uint64_t> read_integer_file(const std::string& path, const SequenceRules& rules = {});

// Flat key-value file with one [section] per experiment.
struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
};
std::vector<ConfigSection> parse_config(std::string_view text);

}  // namespace rwvd::cli

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rwvd {

// A 1-based sequence of positive integers. Values are carried as doubles so that
// rapidly growing sequences such as 2^n stay usable well past 2^64; they are
// exact integers up to 2^53.
class Sequence {
public:
    using Generator = std::function<double(std::uint64_t)>;

    Sequence(std::string description, Generator generator,
             std::optional<std::uint64_t> length = std::nullopt);

    static Sequence from_values(std::vector<std::uint64_t> values, std::string description = "list");
    static Sequence constant(std::uint64_t value);

    // Throws OutOfRange past the end of a finite sequence and InvalidArgument if
    // the generator yields something other than a positive integer.
    double operator()(std::uint64_t n) const;

    const std::string& description() const { return description_; }
    std::optional<std::uint64_t> length() const { return length_; }

private:
    std::string description_;
    Generator generator_;
    std::optional<std::uint64_t> length_;
};

}  // namespace rwvd

#include "rwvd/sequence.hpp"

#include <cmath>
#include <memory>

#include "rwvd/errors.hpp"

namespace rwvd {

Sequence::Sequence(std::string description, Generator generator,
                   std::optional<std::uint64_t> length)
    : description_(std::move(description)), generator_(std::move(generator)), length_(length) {}

Sequence Sequence::from_values(std::vector<std::uint64_t> values, std::string description) {
    auto shared = std::make_shared<const std::vector<std::uint64_t>>(std::move(values));
    const auto len = static_cast<std::uint64_t>(shared->size());
    return Sequence(std::move(description),
                    [shared](std::uint64_t n) { return static_cast<double>((*shared)[n - 1]); }, len);
}

Sequence Sequence::constant(std::uint64_t value) {
    return Sequence(std::to_string(value), [value](std::uint64_t) { return static_cast<double>(value); });
}

double Sequence::operator()(std::uint64_t n) const {
    if (n == 0) throw InvalidArgument("sequence index must be >= 1");
    if (length_ && n > *length_)
        throw OutOfRange("sequence '" + description_ + "' has only " + std::to_string(*length_) +
                         " values; index " + std::to_string(n) + " requested");
    const double v = generator_(n);
    if (!std::isfinite(v) || !(v >= 1.0) || std::floor(v) != v)
        throw InvalidArgument("sequence '" + description_ + "' yields a non-positive or non-integer value at n = " +
                              std::to_string(n));
    return v;
}

}  // namespace rwvd

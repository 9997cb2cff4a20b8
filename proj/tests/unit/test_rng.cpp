#include <doctest.h>

#include <set>
#include <vector>

#include "rwvd/rng.hpp"

using namespace rwvd;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream words are addressable in any order") {
    StepStream forward(42, 3), backward(42, 3);
    std::vector<std::uint32_t> a, b(64);
    for (std::uint64_t i = 0; i < 64; ++i) a.push_back(forward.word(i));
    for (std::uint64_t i = 64; i-- > 0;) b[i] = backward.word(i);
    CHECK(a == b);
    // word i is output i % 4 of block i / 4
    const auto block = philox4x32({5, 0, 3, 0}, {42, 0});
    CHECK(a[21] == block[1]);
}

TEST_CASE("replicas and seeds give distinct streams") {
    std::set<std::uint32_t> first;
    for (std::uint64_t r = 0; r < 100; ++r) first.insert(StepStream(7, r).word(0));
    CHECK(first.size() == 100);
    CHECK(StepStream(1, 0).word(0) != StepStream(2, 0).word(0));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    CHECK(derive_seed(9, 9) == derive_seed(9, 9));
}

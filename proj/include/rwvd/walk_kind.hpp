#pragma once

#include <optional>
#include <string_view>

#include "rwvd/schedules.hpp"

namespace rwvd {

enum class WalkKind { Z2inZ3, Z2inZ4, Z1inZ3, Alternating12 };

struct WalkDims {
    int low = 0;   // d: coordinates moving at every step
    int full = 0;  // D: coordinates moving at scheduled steps
};

const char* to_string(WalkKind kind);
std::optional<WalkKind> parse_walk_kind(std::string_view text);  // z2z3 | z2z4 | z1z3 | alt

// Dimension pair of a varying-dimension walk; throws for Alternating12.
WalkDims walk_dims(WalkKind kind);

// Criterion weight exponent w in n^w * phi-variant(n), and the phi-variant used.
double criterion_weight_exponent(WalkKind kind);
PhiKind criterion_phi_kind(WalkKind kind);

}  // namespace rwvd

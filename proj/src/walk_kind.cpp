#include "rwvd/walk_kind.hpp"

#include "rwvd/errors.hpp"

namespace rwvd {

const char* to_string(WalkKind kind) {
    switch (kind) {
        case WalkKind::Z2inZ3: return "z2z3";
        case WalkKind::Z2inZ4: return "z2z4";
        case WalkKind::Z1inZ3: return "z1z3";
        case WalkKind::Alternating12: return "alt";
    }
    return "unknown";
}

std::optional<WalkKind> parse_walk_kind(std::string_view text) {
    if (text == "z2z3") return WalkKind::Z2inZ3;
    if (text == "z2z4") return WalkKind::Z2inZ4;
    if (text == "z1z3") return WalkKind::Z1inZ3;
    if (text == "alt") return WalkKind::Alternating12;
    return std::nullopt;
}

WalkDims walk_dims(WalkKind kind) {
    switch (kind) {
        case WalkKind::Z2inZ3: return {2, 3};
        case WalkKind::Z2inZ4: return {2, 4};
        case WalkKind::Z1inZ3: return {1, 3};
        case WalkKind::Alternating12: break;
    }
    throw InvalidArgument("the alternating walk has no varying-dimension profile");
}

double criterion_weight_exponent(WalkKind kind) {
    switch (kind) {
        case WalkKind::Z2inZ3: return -0.5;
        case WalkKind::Z2inZ4:
        case WalkKind::Z1inZ3: return -1.0;
        case WalkKind::Alternating12: break;
    }
    throw InvalidArgument("the alternating walk is handled by prop61_sums");
}

PhiKind criterion_phi_kind(WalkKind kind) {
    return kind == WalkKind::Z1inZ3 ? PhiKind::Phi1 : PhiKind::Phi;
}

}  // namespace rwvd

#include "rwvd/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rwvd/errors.hpp"

namespace rwvd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integral(double x) { return std::floor(x) == x; }

// base^exp as an exact integer, or nullopt once it exceeds cap.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && out > cap / base) return std::nullopt;
        out *= base;
    }
    if (out > cap) return std::nullopt;
    return out;
}

double poly_log_value(double m, double alpha) { return m / std::pow(std::log(m), alpha); }

}  // namespace

const char* to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::DoubleExpSqrt: return "doubleexp-sqrt";
        case FamilyKind::DoubleExpTheta: return "doubleexp-theta";
        case FamilyKind::SingleExp: return "singleexp";
        case FamilyKind::ExpPolyLog: return "exppolylog";
        case FamilyKind::Geometric: return "geometric";
        case FamilyKind::PowerLaw: return "powerlaw";
        case FamilyKind::Explicit: return "explicit";
        case FamilyKind::Adaptive: return "adaptive";
    }
    return "unknown";
}

const char* to_string(PhiKind kind) { return kind == PhiKind::Phi ? "phi" : "phi1"; }

ScheduleFamily ScheduleFamily::double_exp_sqrt() { return {FamilyKind::DoubleExpSqrt, 0.5}; }

ScheduleFamily ScheduleFamily::double_exp_theta(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw InvalidArgument("doubleexp-theta: theta must lie in (0, 1)");
    return {FamilyKind::DoubleExpTheta, theta};
}

ScheduleFamily ScheduleFamily::single_exp() { return {FamilyKind::SingleExp, 1.0}; }

ScheduleFamily ScheduleFamily::exp_poly_log(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("exppolylog: alpha must be positive");
    ScheduleFamily f{FamilyKind::ExpPolyLog, alpha};
    // m/log^alpha m increases for log m > alpha; start past that point and past log 2.
    auto m = static_cast<std::uint64_t>(std::floor(std::exp(alpha))) + 1;
    m = std::max<std::uint64_t>(m, 2);
    while (poly_log_value(static_cast<double>(m), alpha) < std::log(2.0)) ++m;
    f.shift_ = m - 1;
    return f;
}

ScheduleFamily ScheduleFamily::geometric(double ratio) {
    if (!(ratio > 1.0) || !std::isfinite(ratio))
        throw InvalidArgument("geometric: ratio must exceed 1");
    return {FamilyKind::Geometric, ratio};
}

ScheduleFamily ScheduleFamily::power_law(double power) {
    if (!(power >= 1.0) || !std::isfinite(power))
        throw InvalidArgument("powerlaw: power must be >= 1");
    return {FamilyKind::PowerLaw, power};
}

ScheduleFamily ScheduleFamily::explicit_values(std::vector<std::uint64_t> values) {
    if (values.empty()) throw InvalidArgument("explicit schedule: empty list");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 2)
            throw InvalidArgument("explicit schedule: value " + std::to_string(values[i]) +
                                  " at index " + std::to_string(i + 1) + " is below 2");
        if (i > 0 && values[i] <= values[i - 1])
            throw InvalidArgument("explicit schedule: not strictly increasing at index " +
                                  std::to_string(i + 1));
    }
    ScheduleFamily f{FamilyKind::Explicit, std::numeric_limits<double>::quiet_NaN()};
    f.values_ = std::move(values);
    return f;
}

ScheduleFamily ScheduleFamily::adaptive(std::vector<std::uint64_t> values) {
    ScheduleFamily f = explicit_values(std::move(values));
    f.kind_ = FamilyKind::Adaptive;
    return f;
}

std::string ScheduleFamily::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    switch (kind_) {
        case FamilyKind::DoubleExpTheta: os << "(theta=" << param_ << ")"; break;
        case FamilyKind::ExpPolyLog: os << "(alpha=" << param_ << ",shift=" << shift_ << ")"; break;
        case FamilyKind::Geometric: os << "(ratio=" << param_ << ")"; break;
        case FamilyKind::PowerLaw: os << "(power=" << param_ << ")"; break;
        case FamilyKind::Explicit:
        case FamilyKind::Adaptive: os << "(" << values_.size() << " values)"; break;
        default: break;
    }
    return os.str();
}

void ScheduleFamily::check_index(std::uint64_t n, std::uint64_t extra) const {
    if (n == 0) throw InvalidArgument("schedule index must be >= 1");
    if (is_listed() && n + extra > values_.size())
        throw OutOfRange("schedule index " + std::to_string(n + extra) + " beyond the " +
                         std::to_string(values_.size()) + " listed values");
}

double ScheduleFamily::log_log_value(std::uint64_t n) const {
    check_index(n, 0);
    const auto x = static_cast<double>(n);
    switch (kind_) {
        case FamilyKind::DoubleExpSqrt: return std::sqrt(x);
        case FamilyKind::DoubleExpTheta: return std::pow(x, param_);
        case FamilyKind::SingleExp: return x;
        case FamilyKind::ExpPolyLog: {
            const double m = x + static_cast<double>(shift_);
            return std::log(m) - param_ * std::log(std::log(m));
        }
        case FamilyKind::Geometric: return std::log(x) + std::log(std::log(param_));
        case FamilyKind::PowerLaw:
            return n == 1 ? -kInf : std::log(param_) + std::log(std::log(x));
        case FamilyKind::Explicit:
        case FamilyKind::Adaptive: return std::log(std::log(static_cast<double>(values_[n - 1])));
    }
    return 0.0;
}

double ScheduleFamily::log_value(std::uint64_t n) const {
    check_index(n, 0);
    const auto x = static_cast<double>(n);
    double value = 0.0;
    switch (kind_) {
        case FamilyKind::ExpPolyLog:
            value = poly_log_value(x + static_cast<double>(shift_), param_);
            break;
        case FamilyKind::Geometric: value = x * std::log(param_); break;
        case FamilyKind::PowerLaw: value = param_ * std::log(x); break;
        case FamilyKind::Explicit:
        case FamilyKind::Adaptive: value = std::log(static_cast<double>(values_[n - 1])); break;
        default: value = std::exp(log_log_value(n)); break;
    }
    if (!std::isfinite(value))
        throw OverflowError(std::string("log a_n overflows for ") + describe() + " at n = " +
                            std::to_string(n));
    return value;
}

double ScheduleFamily::log_log_step(std::uint64_t n) const {
    check_index(n, 1);
    const auto x = static_cast<double>(n);
    switch (kind_) {
        case FamilyKind::DoubleExpSqrt:
            // sqrt(n+1) - sqrt(n) without cancellation
            return 1.0 / (std::sqrt(x + 1.0) + std::sqrt(x));
        case FamilyKind::DoubleExpTheta:
            return std::pow(x, param_) * std::expm1(param_ * std::log1p(1.0 / x));
        case FamilyKind::SingleExp: return 1.0;
        case FamilyKind::ExpPolyLog: {
            const double m = x + static_cast<double>(shift_);
            const double dm = std::log1p(1.0 / m);
            return dm - param_ * std::log1p(dm / std::log(m));
        }
        case FamilyKind::Geometric: return std::log1p(1.0 / x);
        case FamilyKind::PowerLaw:
            return n == 1 ? kInf : std::log1p(std::log1p(1.0 / x) / std::log(x));
        case FamilyKind::Explicit:
        case FamilyKind::Adaptive: {
            const double lo = std::log(static_cast<double>(values_[n - 1]));
            return std::log1p(log_step(n) / lo);
        }
    }
    return 0.0;
}

double ScheduleFamily::log_step(std::uint64_t n) const {
    check_index(n, 1);
    const auto x = static_cast<double>(n);
    switch (kind_) {
        case FamilyKind::DoubleExpSqrt:
        case FamilyKind::DoubleExpTheta:
        case FamilyKind::SingleExp:
        case FamilyKind::ExpPolyLog: {
            // L(n) * (exp(dl) - 1), evaluated in log space so only the result can overflow
            const double ll = log_log_value(n);
            return std::exp(ll + std::log(std::expm1(log_log_step(n))));
        }
        case FamilyKind::Geometric: return std::log(param_);
        case FamilyKind::PowerLaw: return param_ * std::log1p(1.0 / x);
        case FamilyKind::Explicit:
        case FamilyKind::Adaptive: {
            const auto lo = values_[n - 1];
            const auto hi = values_[n];
            return std::log1p(static_cast<double>(hi - lo) / static_cast<double>(lo));
        }
    }
    return 0.0;
}

std::optional<TailAsymptotics> ScheduleFamily::asymptotics(PhiKind kind) const {
    const bool phi1 = kind == PhiKind::Phi1;
    switch (kind_) {
        case FamilyKind::DoubleExpSqrt:
        case FamilyKind::DoubleExpTheta:
            // phi ~ theta n^(theta-1); L(n+1)-L(n) -> inf so phi1 -> 1
            return phi1 ? TailAsymptotics{0.0, 0.0} : TailAsymptotics{param_ - 1.0, 0.0};
        case FamilyKind::SingleExp: return TailAsymptotics{0.0, 0.0};
        case FamilyKind::ExpPolyLog:
            // phi ~ 1/n; L(n+1)-L(n) ~ log^-alpha n so phi1 ~ log^(-alpha/2) n
            return phi1 ? TailAsymptotics{0.0, -param_ / 2.0} : TailAsymptotics{-1.0, 0.0};
        case FamilyKind::Geometric:
            return phi1 ? TailAsymptotics{0.0, 0.0} : TailAsymptotics{-1.0, 0.0};
        case FamilyKind::PowerLaw:
            // phi ~ 1/(n log n); phi1 ~ sqrt(p/n)
            return phi1 ? TailAsymptotics{-0.5, 0.0} : TailAsymptotics{-1.0, -1.0};
        case FamilyKind::Explicit:
        case FamilyKind::Adaptive: return std::nullopt;
    }
    return std::nullopt;
}

double eval_log(const ScheduleFamily& family, std::uint64_t n) { return family.log_value(n); }

namespace {

std::optional<std::uint64_t> exact_value(const ScheduleFamily& family, std::uint64_t n,
                                         std::uint64_t cap) {
    const double p = family.parameter();
    if (family.kind() == FamilyKind::Geometric && is_integral(p) && p < 4294967296.0)
        return checked_pow(static_cast<std::uint64_t>(p), n, cap);
    if (family.kind() == FamilyKind::PowerLaw && is_integral(p) && p < 64.0)
        return checked_pow(n, static_cast<std::uint64_t>(p), cap);
    return std::nullopt;
}

bool exactly_computable(const ScheduleFamily& family) {
    const double p = family.parameter();
    return (family.kind() == FamilyKind::Geometric && is_integral(p) && p < 4294967296.0) ||
           (family.kind() == FamilyKind::PowerLaw && is_integral(p) && p < 64.0);
}

[[noreturn]] void not_materializable(const ScheduleFamily& family, std::uint64_t n,
                                     std::uint64_t cap) {
    throw NotMaterializable("a_" + std::to_string(n) + " of " + family.describe() +
                            " exceeds the materialization cap " + std::to_string(cap));
}

std::uint64_t rounded_value(const ScheduleFamily& family, std::uint64_t n, std::uint64_t cap) {
    const double ll = family.log_log_value(n);
    if (ll > std::log(std::log(static_cast<double>(cap)) + 1.0)) not_materializable(family, n, cap);
    const double value = std::round(std::exp(family.log_value(n)));
    if (!(value <= static_cast<double>(cap))) not_materializable(family, n, cap);
    return static_cast<std::uint64_t>(value);
}

}  // namespace

std::uint64_t materialize(const ScheduleFamily& family, std::uint64_t n, std::uint64_t cap) {
    if (n == 0) throw InvalidArgument("schedule index must be >= 1");
    if (family.is_listed()) {
        if (n > family.values().size())
            throw OutOfRange("schedule index " + std::to_string(n) + " beyond the listed values");
        const auto v = family.values()[n - 1];
        if (v > cap) not_materializable(family, n, cap);
        return v;
    }
    if (exactly_computable(family)) {
        const auto v = exact_value(family, n, cap);
        if (!v) not_materializable(family, n, cap);
        return *v;
    }
    const std::uint64_t target = rounded_value(family, n, cap);
    std::uint64_t prev = 1;
    for (std::uint64_t j = 1; j < n; ++j) prev = std::max({rounded_value(family, j, cap), prev + 1, std::uint64_t{2}});
    const auto out = std::max({target, prev + 1, std::uint64_t{2}});
    if (out > cap) not_materializable(family, n, cap);
    return out;
}

std::vector<std::uint64_t> materialize_upto(const ScheduleFamily& family, std::uint64_t horizon) {
    std::vector<std::uint64_t> out;
    if (horizon > kMaterializeCap)
        throw NotMaterializable("horizon " + std::to_string(horizon) +
                                " exceeds the materialization cap");
    if (family.is_listed()) {
        for (auto v : family.values()) {
            if (v > horizon) break;
            out.push_back(v);
        }
        return out;
    }
    const bool exact = exactly_computable(family);
    std::uint64_t prev = 1;
    for (std::uint64_t n = 1;; ++n) {
        std::uint64_t v = 0;
        if (exact) {
            const auto e = exact_value(family, n, horizon);
            if (!e) break;
            v = *e;
        } else {
            if (family.log_log_value(n) > std::log(std::log(static_cast<double>(horizon) + 1.0) + 1.0))
                break;
            const double raw = std::round(std::exp(family.log_value(n)));
            v = std::max({raw > static_cast<double>(horizon) ? horizon + 1 : static_cast<std::uint64_t>(raw),
                          prev + 1, std::uint64_t{2}});
        }
        if (v > horizon) break;
        out.push_back(v);
        prev = v;
    }
    return out;
}

double phi(const ScheduleFamily& family, std::uint64_t n) {
    return -std::expm1(-family.log_log_step(n));
}

double phi1(const ScheduleFamily& family, std::uint64_t n) {
    return std::sqrt(-std::expm1(-family.log_step(n)));
}

double phi_value(const ScheduleFamily& family, PhiKind kind, std::uint64_t n) {
    return kind == PhiKind::Phi ? phi(family, n) : phi1(family, n);
}

std::vector<double> phi_values(const ScheduleFamily& family, PhiKind kind, std::uint64_t count) {
    std::vector<double> out;
    out.reserve(count);
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(phi_value(family, kind, n));
    return out;
}

std::vector<PhiReport> phi_table(const ScheduleFamily& family, PhiKind kind, std::uint64_t from,
                                 std::uint64_t to) {
    if (from == 0 || to < from) throw InvalidArgument("phi table: need 1 <= from <= to");
    std::vector<PhiReport> out;
    out.reserve(to - from + 1);
    for (std::uint64_t n = from; n <= to; ++n) out.push_back({n, phi_value(family, kind, n), kind});
    return out;
}

MonotoneReport check_monotone(const ScheduleFamily& family, PhiKind kind, std::uint64_t n_max) {
    if (n_max < 2) throw InvalidArgument("check_monotone: N must be >= 2");
    MonotoneReport report;
    double prev = phi_value(family, kind, 1);
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const double cur = phi_value(family, kind, n);
        if (cur > prev + kMonotoneTolerance) {
            report.nonincreasing = false;
            report.first_violation = n;
            return report;
        }
        prev = cur;
    }
    return report;
}

double check_bounded_ratio(const ScheduleFamily& family, PhiKind kind, std::uint64_t n_max) {
    if (n_max < 2) throw InvalidArgument("check_bounded_ratio: N must be >= 2");
    double running_min = phi_value(family, kind, 1);
    double best = 0.0;
    for (std::uint64_t m = 2; m <= n_max; ++m) {
        const double v = phi_value(family, kind, m);
        best = std::max(best, v / running_min);
        running_min = std::min(running_min, v);
    }
    return best;
}

}  // namespace rwvd

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rwvd {

enum class FamilyKind {
    DoubleExpSqrt,   // a_n = exp(e^sqrt(n))
    DoubleExpTheta,  // a_n = exp(e^(n^theta))
    SingleExp,       // a_n = exp(e^n)
    ExpPolyLog,      // a_n = exp(m / log^alpha m), m = n + shift
    Geometric,       // a_n = r^n
    PowerLaw,        // a_n = n^p
    Explicit,
    Adaptive,
};

enum class PhiKind { Phi, Phi1 };

const char* to_string(FamilyKind kind);
const char* to_string(PhiKind kind);

// Leading-order behaviour c * n^beta * (log n)^gamma of phi or phi1.
struct TailAsymptotics {
    double beta = 0.0;
    double gamma = 0.0;
};

inline constexpr std::uint64_t kMaterializeCap = std::uint64_t{1} << 53;

// A strictly increasing schedule {a_n} held in log-domain: the family exposes
// L(n) = log a_n, log L(n) and the stable one-step differences of both.
class ScheduleFamily {
public:
    static ScheduleFamily double_exp_sqrt();
    static ScheduleFamily double_exp_theta(double theta);
    static ScheduleFamily single_exp();
    static ScheduleFamily exp_poly_log(double alpha);
    static ScheduleFamily geometric(double ratio);
    static ScheduleFamily power_law(double power);
    static ScheduleFamily explicit_values(std::vector<std::uint64_t> values);
    static ScheduleFamily adaptive(std::vector<std::uint64_t> values);

    FamilyKind kind() const { return kind_; }
    double parameter() const { return param_; }
    // Index offset used by ExpPolyLog so that L is increasing and L(1) >= log 2.
    std::uint64_t shift() const { return shift_; }
    const std::vector<std::uint64_t>& values() const { return values_; }
    bool is_listed() const { return kind_ == FamilyKind::Explicit || kind_ == FamilyKind::Adaptive; }
    std::string describe() const;

    // L(n); throws OverflowError when L(n) is not a finite double.
    double log_value(std::uint64_t n) const;
    // log L(n); finite far beyond the range where L(n) overflows.
    double log_log_value(std::uint64_t n) const;
    // L(n+1) - L(n); +inf when the difference overflows.
    double log_step(std::uint64_t n) const;
    // log L(n+1) - log L(n).
    double log_log_step(std::uint64_t n) const;

    std::optional<TailAsymptotics> asymptotics(PhiKind kind) const;

private:
    ScheduleFamily(FamilyKind kind, double param) : kind_(kind), param_(param) {}
    void check_index(std::uint64_t n, std::uint64_t extra) const;

    FamilyKind kind_;
    double param_;
    std::uint64_t shift_ = 0;
    std::vector<std::uint64_t> values_;
};

struct PhiReport {
    std::uint64_t n = 0;
    double value = 0.0;
    PhiKind kind = PhiKind::Phi;
};

struct MonotoneReport {
    bool nonincreasing = true;
    std::optional<std::uint64_t> first_violation;
};

inline constexpr double kMonotoneTolerance = 1e-12;

double eval_log(const ScheduleFamily& family, std::uint64_t n);

// round(exp(L(n))) for analytic families, repaired to stay strictly increasing
// and >= 2; exact integer powers for integral Geometric/PowerLaw parameters.
std::uint64_t materialize(const ScheduleFamily& family, std::uint64_t n,
                          std::uint64_t cap = kMaterializeCap);
// All a_n <= horizon, in order.
std::vector<std::uint64_t> materialize_upto(const ScheduleFamily& family, std::uint64_t horizon);

double phi(const ScheduleFamily& family, std::uint64_t n);
double phi1(const ScheduleFamily& family, std::uint64_t n);
double phi_value(const ScheduleFamily& family, PhiKind kind, std::uint64_t n);
// phi-variant for n = 1..count.
std::vector<double> phi_values(const ScheduleFamily& family, PhiKind kind, std::uint64_t count);
std::vector<PhiReport> phi_table(const ScheduleFamily& family, PhiKind kind, std::uint64_t from,
                                 std::uint64_t to);

MonotoneReport check_monotone(const ScheduleFamily& family, PhiKind kind, std::uint64_t n_max);
// max over 1 <= n < m <= n_max of phi(m) / phi(n).
double check_bounded_ratio(const ScheduleFamily& family, PhiKind kind, std::uint64_t n_max);

}  // namespace rwvd

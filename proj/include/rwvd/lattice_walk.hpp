#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rwvd/rng.hpp"
#include "rwvd/schedules.hpp"
#include "rwvd/sequence.hpp"
#include "rwvd/walk_kind.hpp"

namespace rwvd {

// Probability mass function of one coordinate: (offset, probability) pairs.
struct Marginal {
    std::vector<std::pair<std::int64_t, double>> pmf;

    double mean() const;
    double variance() const;
    std::int64_t max_abs_offset() const;
    bool operator==(const Marginal&) const = default;
};

// Increment law on Z^D with independent coordinates: the product of its marginals.
struct LatticeDistribution {
    std::vector<Marginal> marginals;

    int dimension() const { return static_cast<int>(marginals.size()); }
    bool operator==(const LatticeDistribution&) const = default;
};

LatticeDistribution simple_walk(int dimension);
LatticeDistribution lazy_walk(int dimension, double hold = 0.5);

struct ValidationReport {
    std::vector<std::uint64_t> periods;  // per coordinate
    std::vector<std::string> warnings;
    bool aperiodic() const;
};

// Checks normalization, zero mean and non-degeneracy of every marginal
// (throws InvalidDistribution); reports periodic marginals as warnings.
ValidationReport validate(const LatticeDistribution& dist);
std::uint64_t marginal_period(const Marginal& marginal);

LatticeDistribution lazify(const LatticeDistribution& dist, double hold);
LatticeDistribution project(const LatticeDistribution& dist, int d);

// Inverse-CDF sampling of a marginal from one 32-bit stream word.
class MarginalSampler {
public:
    explicit MarginalSampler(const Marginal& marginal);
    std::int64_t operator()(std::uint32_t word) const {
        for (std::size_t i = 0; i + 1 < thresholds_.size(); ++i)
            if (word < thresholds_[i]) return offsets_[i];
        return offsets_.back();
    }

private:
    std::vector<std::uint64_t> thresholds_;
    std::vector<std::int64_t> offsets_;
};

struct VaryingDimension {
    int low = 2;   // d
    int full = 3;  // D
    ScheduleFamily schedule = ScheduleFamily::double_exp_sqrt();
};

struct AlternatingBlocks {
    Sequence a_seq;  // diagonal block lengths
    Sequence b_seq;  // horizontal block lengths
};

struct DimensionProfile {
    std::variant<VaryingDimension, AlternatingBlocks> mode;
    std::uint64_t horizon = 0;
};

DimensionProfile varying_profile(WalkKind kind, ScheduleFamily schedule, std::uint64_t horizon);

struct ReturnRecord {
    std::vector<std::uint64_t> return_times;         // filled only when tracing
    std::vector<std::uint64_t> return_intervals;     // interval index of each return
    std::vector<std::uint64_t> per_interval_counts;  // entry n-1 counts returns in interval n
    std::uint64_t returns_before_schedule = 0;       // returns in [1, a_1)
    std::vector<std::int64_t> final_position;
    std::uint64_t steps_taken = 0;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;

    std::uint64_t total_returns() const;
};

// Exact simulation from the origin over steps k = 1..horizon. Step k draws all D
// coordinates when k is a scheduled time and the first d otherwise; the rest stay
// frozen. Coordinate j of step k reads stream word (k - 1) * D + j.
ReturnRecord simulate_rwvd(const LatticeDistribution& dist, const DimensionProfile& profile,
                           std::uint64_t seed, bool record_trace, std::uint64_t replica = 0);

// Homogeneous walk with the same stream layout (all coordinates every step).
ReturnRecord simulate_homogeneous(const LatticeDistribution& dist, std::uint64_t horizon,
                                  std::uint64_t seed, bool record_trace, std::uint64_t replica = 0);

// a_1 diagonal steps (uniform over the four diagonal neighbours), b_1 horizontal
// simple-walk steps, a_2 diagonal steps, ... Step k reads words 2(k-1) (x) and
// 2(k-1)+1 (y). Interval n is the n-th block (odd n diagonal, even n horizontal).
ReturnRecord simulate_alternating(const Sequence& a_seq, const Sequence& b_seq,
                                  std::uint64_t horizon, std::uint64_t seed, bool record_trace,
                                  std::uint64_t replica = 0);

struct IntervalStats {
    std::uint64_t index = 0;
    std::uint64_t start = 0;
    std::uint64_t end = 0;  // exclusive, clipped to horizon + 1
    double mean_returns = 0.0;
    double stderr_returns = 0.0;
    double hit_fraction = 0.0;
};

struct SimulationSummary {
    std::uint64_t replicas = 0;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 0;
    std::vector<IntervalStats> intervals;
    std::uint64_t total_returns = 0;
    std::uint64_t returns_before_schedule = 0;
    std::uint64_t replicas_with_return = 0;
    double mean_returns = 0.0;
    std::vector<double> final_mean;
    std::vector<double> final_variance;
};

struct TraceRow {
    std::uint64_t replica = 0;
    std::uint64_t k = 0;
    std::uint64_t interval_index = 0;  // 0 for returns before the first interval
};

// Replicas r = 0..replicas-1 of simulate_rwvd (or simulate_alternating for an
// AlternatingBlocks profile) aggregated in replica order.
SimulationSummary simulate_replicas(const LatticeDistribution& dist, const DimensionProfile& profile,
                                    std::uint64_t seed, std::uint64_t replicas,
                                    std::vector<TraceRow>* trace = nullptr);

inline constexpr const char* kTraceHeader = "replica,k,interval_index";
void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows);

struct AdaptiveLevel {
    std::uint64_t start = 0;  // a_n
    std::uint64_t end = 0;    // a_{n+1}
    double p_hat = 0.0;
    double stderr_p = 0.0;
};

struct AdaptiveSchedule {
    ScheduleFamily family = ScheduleFamily::adaptive({2, 3});
    std::vector<AdaptiveLevel> levels;
};

// Chooses a_{n+1} = a_n + 2^i for the least i whose Monte Carlo estimate of
// P[exists k in (a_n, a_{n+1}] : pi_xy(S_k) = 0] reaches `target`.
AdaptiveSchedule build_adaptive_schedule(const LatticeDistribution& dist3, int levels,
                                         double target, std::uint64_t replicas,
                                         std::uint64_t seed, std::uint64_t cap,
                                         std::uint64_t first = 2);

}  // namespace rwvd

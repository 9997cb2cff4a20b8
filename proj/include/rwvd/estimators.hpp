#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rwvd/lattice_walk.hpp"
#include "rwvd/schedules.hpp"
#include "rwvd/walk_kind.hpp"

namespace rwvd {

// Largest horizons the dense DP will attempt.
inline constexpr std::uint64_t kMaxDpSteps1D = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kMaxDpSteps2D = std::uint64_t{1} << 10;
inline constexpr std::int64_t kMaxRadius1D = std::int64_t{1} << 22;
inline constexpr std::int64_t kMaxRadius2D = 1500;
inline constexpr double kTruncationBound = 1e-12;

// Probability vector of a walk on [-R, R]^dimension after k steps. Mass that
// leaves the box is dropped into truncated_mass; absorbed_mass collects mass
// removed at the origin by hitting runs.
struct DPTable {
    int dimension = 1;
    std::uint64_t k = 0;
    std::int64_t radius = 0;
    std::vector<double> prob;  // row-major, x fastest
    double absorbed_mass = 0.0;
    double truncated_mass = 0.0;

    std::int64_t width() const { return 2 * radius + 1; }
    double at(std::int64_t x) const;
    double at(std::int64_t x, std::int64_t y) const;
    double total() const;  // prob sum + absorbed + truncated
};

struct DPOptions {
    std::optional<std::int64_t> radius;  // default: exact in 1D, auto-widened in 2D
    double epsilon = kTruncationBound;   // bound on truncated mass for the auto radius
};

struct DPRun {
    DPTable table;
    double value = 0.0;
    double max_mass_error = 0.0;              // worst |total - 1| over all steps
    bool truncation_monotone = true;          // truncated_mass never decreased
    std::vector<double> absorbed_by_step;     // hitting runs: mass absorbed at k = a..b-1
};

// P[S_k = 0] for k = 0..kmax from one forward pass (exact, no truncation).
std::vector<double> return_prob_series(const Marginal& marginal, std::uint64_t kmax);

// P[S_k = 0]; product laws are evaluated as the product of per-coordinate values.
double exact_return_prob(const LatticeDistribution& dist, std::uint64_t k);

// Full forward DP in dimension 1 or 2 (no product shortcut).
DPRun run_return_dp(const LatticeDistribution& dist, std::uint64_t k, const DPOptions& opts = {});

// P[S_k = 0 for some a <= k < b]: free evolution to a - 1, then absorption at the
// origin after each step k in [a, b).
DPRun run_hitting_dp(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                     const DPOptions& opts = {});
double exact_hitting_dp(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                        const DPOptions& opts = {});

struct HittingEstimate {
    double p_hat = 0.0;
    double stderr_p = 0.0;
    std::uint64_t replicas = 0;
    bool exact = false;
};

HittingEstimate exact_hitting(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                              const DPOptions& opts = {});
HittingEstimate mc_hitting(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                           std::uint64_t replicas, std::uint64_t seed);

struct LcltFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    std::uint64_t period = 1;
    std::vector<std::uint64_t> ks;
    std::vector<double> probs;
};

// Slope of ln P[S_k = 0] against ln k over a geometric grid in [k_min, k_max];
// periodic walks are sampled on multiples of their period.
LcltFit lclt_exponent_fit(const LatticeDistribution& dist, std::uint64_t k_min, std::uint64_t k_max,
                          int points = 25);

struct BandCell {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    double p_exact = 0.0;
    double reference = 0.0;
    double ratio = 0.0;
};

struct BoundBandReport {
    int dimension = 1;
    std::vector<BandCell> cells;
    std::uint64_t excluded = 0;  // 2D cells with b <= 2a
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double spread() const { return max_ratio / min_ratio; }
};

struct GridCell {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
};

// sqrt((b - a) / b) in 1D, log(b / a) / log(b) in 2D.
double band_reference(int dimension, std::uint64_t a, std::uint64_t b);
std::vector<GridCell> default_band_grid(int dimension);
BoundBandReport bound_band_scan(const LatticeDistribution& dist, int dimension,
                                std::span<const GridCell> grid);

inline constexpr const char* kBandHeader = "a,b,p_exact,reference,ratio";

struct SecondMomentReport {
    double ratio = 0.0;
    double first_moment = 0.0;   // E sum I_n
    double second_moment = 0.0;  // E (sum I_n)^2
    std::vector<std::uint64_t> eligible;  // n with a_{n+1} >= 2 a_n
    std::vector<double> indicator_means;  // E I_n for n = 1..M
    std::uint64_t replicas = 0;
};

// Monte Carlo E(sum_{n<=M} I_n)^2 / (E sum I_n)^2 where I_n flags a return in
// [a_n, a_{n+1} - 1] on intervals with a_{n+1} >= 2 a_n.
SecondMomentReport second_moment_ratio(WalkKind kind, const ScheduleFamily& family, std::uint64_t M,
                                       std::uint64_t replicas, std::uint64_t seed);
SecondMomentReport second_moment_ratio(const LatticeDistribution& dist, WalkKind kind,
                                       const ScheduleFamily& family, std::uint64_t M,
                                       std::uint64_t replicas, std::uint64_t seed);

// Default increment law for a walk kind: lazy +-1 marginals (hold 1/2) in every coordinate.
LatticeDistribution default_law(WalkKind kind);

}  // namespace rwvd

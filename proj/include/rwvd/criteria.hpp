#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rwvd/schedules.hpp"
#include "rwvd/sequence.hpp"
#include "rwvd/walk_kind.hpp"

namespace rwvd {

enum class Verdict { Transient, Recurrent, Inconclusive };
enum class VerdictSource { AnalyticHint, TailFit };
enum class SeriesVerdict { Convergent, Divergent, Undetermined };
enum class GapVerdict { ConstructibleRecurrent, ForcedTransient };

const char* to_string(Verdict v);
const char* to_string(VerdictSource v);
const char* to_string(SeriesVerdict v);
const char* to_string(GapVerdict v);

// Guard band around the critical exponent -1.
inline constexpr double kTailGuard = 0.05;
inline constexpr std::uint64_t kMinFitRange = 100;

// Tail-exponent fit of a positive term sequence over the last decade [N/10, N]:
// beta is the log-log slope; when |beta + 1| <= guard the refinement fits
// n * term ~ c (log n)^gamma.
struct TailFit {
    double beta = 0.0;
    std::optional<double> gamma;
    SeriesVerdict verdict = SeriesVerdict::Undetermined;
    std::uint64_t window_begin = 0;
    std::uint64_t window_end = 0;
};

// terms[i] is the term for n = i + 1. Needs at least 20 terms.
TailFit fit_tail(std::span<const double> terms);
// Verdict for a series whose terms behave like n^beta (log n)^gamma.
SeriesVerdict series_verdict(const TailAsymptotics& tail);

struct PruningDiagnostics {
    std::vector<bool> long_interval;  // a_{n+1} >= 2 a_n
    std::uint64_t pruned = 0;
    std::uint64_t unpruned = 0;
    double correction_c0 = 0.0;  // sum over pruned n of n^(-1/2) phi(n)
};

struct CriterionReport {
    WalkKind walk_kind = WalkKind::Z2inZ3;
    std::string family;
    std::uint64_t n_evaluated = 0;
    std::vector<double> partial_sums;
    std::optional<TailFit> tail_fit;
    std::optional<TailAsymptotics> analytic_tail;
    bool monotone_ok = false;
    std::optional<std::uint64_t> first_violation;
    double ratio_sup = 0.0;
    bool bounded_ratio_ok = false;
    SeriesVerdict series = SeriesVerdict::Undetermined;
    Verdict verdict = Verdict::Inconclusive;
    VerdictSource verdict_source = VerdictSource::TailFit;
    // Verdict the tail fit alone would give (absent when N < 100).
    std::optional<Verdict> fit_verdict;
    PruningDiagnostics pruning;
    std::map<std::string, double> diagnostics;

    double tail_exponent_fit() const { return tail_fit ? tail_fit->beta : 0.0; }
};

// n^w * phi-variant(n) for n = 1..n_max.
std::vector<double> criterion_terms(WalkKind kind, const ScheduleFamily& family, std::uint64_t n_max);
std::vector<double> criterion_partial_sums(WalkKind kind, const ScheduleFamily& family,
                                           std::uint64_t n_max);
CriterionReport classify(WalkKind kind, const ScheduleFamily& family, std::uint64_t n_max);

PruningDiagnostics pruning_diagnostics(const ScheduleFamily& family, std::uint64_t n_max);

GapVerdict dimension_gap_check(std::vector<int> dims);

struct Lemma46Result {
    std::vector<double> terms;
    std::vector<double> partial_sums;
    // Term sums over (N/8, N/4], (N/4, N/2], (N/2, N].
    std::optional<std::array<double, 3>> doubling_increments;
    std::optional<bool> bounded_heuristic;
};

Lemma46Result lemma46_partial_sums(const Sequence& b_seq, std::uint64_t n_max);

struct Prop61Result {
    std::vector<double> terms_dumb;
    std::vector<double> terms_t;
    std::vector<double> sum_dumb;
    std::vector<double> sum_t;
    std::optional<TailFit> fit_dumb;
    std::optional<TailFit> fit_t;
    SeriesVerdict verdict_dumb = SeriesVerdict::Undetermined;
    SeriesVerdict verdict_t = SeriesVerdict::Undetermined;
    bool transient = false;  // both conditions convergent
};

Prop61Result prop61_sums(const Sequence& a_seq, const Sequence& b_seq, std::uint64_t n_max);

// sum_{j=1}^{count} ((c + j)(d + j))^(-1/2): the inner sum of the block-return condition.
double pair_inverse_sqrt_sum(double count, double c, double d);

std::vector<double> expected_visits_partial_sum(WalkKind kind, const ScheduleFamily& family,
                                                std::uint64_t n_max);

}  // namespace rwvd

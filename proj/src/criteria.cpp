#include "rwvd/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "rwvd/errors.hpp"
#include "rwvd/numeric.hpp"

namespace rwvd {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Transient: return "Transient";
        case Verdict::Recurrent: return "Recurrent";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(VerdictSource v) {
    return v == VerdictSource::AnalyticHint ? "AnalyticHint" : "TailFit";
}

const char* to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Convergent: return "Convergent";
        case SeriesVerdict::Divergent: return "Divergent";
        case SeriesVerdict::Undetermined: return "Undetermined";
    }
    return "?";
}

const char* to_string(GapVerdict v) {
    return v == GapVerdict::ConstructibleRecurrent ? "ConstructibleRecurrent" : "ForcedTransient";
}

namespace {

constexpr double kExponentEps = 1e-9;

std::vector<double> prefix_sums(std::span<const double> terms) {
    std::vector<double> out;
    out.reserve(terms.size());
    CompensatedSum s;
    for (double t : terms) {
        s += t;
        out.push_back(s.value());
    }
    return out;
}

SeriesVerdict verdict_from_exponent(double exponent) {
    if (exponent < -1.0 - kTailGuard) return SeriesVerdict::Convergent;
    if (exponent > -1.0 + kTailGuard) return SeriesVerdict::Divergent;
    return SeriesVerdict::Undetermined;
}

Verdict walk_verdict(SeriesVerdict series, bool regular) {
    switch (series) {
        case SeriesVerdict::Convergent: return Verdict::Transient;
        case SeriesVerdict::Divergent: return regular ? Verdict::Recurrent : Verdict::Inconclusive;
        case SeriesVerdict::Undetermined: return Verdict::Inconclusive;
    }
    return Verdict::Inconclusive;
}

}  // namespace

TailFit fit_tail(std::span<const double> terms) {
    const std::uint64_t n_max = terms.size();
    if (n_max < 20) throw InsufficientRange("tail fit needs at least 20 terms");
    TailFit fit;
    fit.window_begin = std::max<std::uint64_t>(2, n_max / 10);
    fit.window_end = n_max;
    std::vector<double> log_n, log_log_n, log_term, log_scaled;
    for (std::uint64_t n = fit.window_begin; n <= n_max; ++n) {
        const double t = terms[n - 1];
        if (!(t > 0.0)) continue;  // underflowed terms carry no slope information
        const auto x = static_cast<double>(n);
        log_n.push_back(std::log(x));
        log_log_n.push_back(std::log(std::log(x)));
        log_term.push_back(std::log(t));
        log_scaled.push_back(std::log(t) + std::log(x));
    }
    if (log_n.size() < 2) {
        // terms vanish in double precision: faster than any power
        fit.beta = -std::numeric_limits<double>::infinity();
        fit.verdict = SeriesVerdict::Convergent;
        return fit;
    }
    fit.beta = least_squares(log_n, log_term).slope;
    fit.verdict = verdict_from_exponent(fit.beta);
    if (fit.verdict == SeriesVerdict::Undetermined) {
        fit.gamma = least_squares(log_log_n, log_scaled).slope;
        fit.verdict = verdict_from_exponent(*fit.gamma);
    }
    return fit;
}

SeriesVerdict series_verdict(const TailAsymptotics& tail) {
    if (tail.beta < -1.0 - kExponentEps) return SeriesVerdict::Convergent;
    if (tail.beta > -1.0 + kExponentEps) return SeriesVerdict::Divergent;
    return tail.gamma < -1.0 - kExponentEps ? SeriesVerdict::Convergent : SeriesVerdict::Divergent;
}

std::vector<double> criterion_terms(WalkKind kind, const ScheduleFamily& family, std::uint64_t n_max) {
    const double w = criterion_weight_exponent(kind);
    const PhiKind variant = criterion_phi_kind(kind);
    std::vector<double> out;
    out.reserve(n_max);
    for (std::uint64_t n = 1; n <= n_max; ++n)
        out.push_back(std::pow(static_cast<double>(n), w) * phi_value(family, variant, n));
    return out;
}

std::vector<double> criterion_partial_sums(WalkKind kind, const ScheduleFamily& family,
                                           std::uint64_t n_max) {
    if (n_max < 1) throw InvalidArgument("criterion_partial_sums: N must be >= 1");
    const auto terms = criterion_terms(kind, family, n_max);
    return prefix_sums(terms);
}

PruningDiagnostics pruning_diagnostics(const ScheduleFamily& family, std::uint64_t n_max) {
    PruningDiagnostics out;
    out.long_interval.reserve(n_max);
    const double log2 = std::log(2.0);
    CompensatedSum c0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const bool is_long = family.log_step(n) >= log2;
        out.long_interval.push_back(is_long);
        if (is_long) {
            ++out.unpruned;
        } else {
            ++out.pruned;
            c0 += phi(family, n) / std::sqrt(static_cast<double>(n));
        }
    }
    out.correction_c0 = c0.value();
    return out;
}

CriterionReport classify(WalkKind kind, const ScheduleFamily& family, std::uint64_t n_max) {
    const PhiKind variant = criterion_phi_kind(kind);
    CriterionReport report;
    report.walk_kind = kind;
    report.family = family.describe();
    report.n_evaluated = n_max;
    report.analytic_tail = family.asymptotics(variant);
    if (report.analytic_tail) {
        report.analytic_tail->beta += criterion_weight_exponent(kind);
        if (n_max < 2) throw InsufficientRange("classify: N must be >= 2");
    } else if (n_max < kMinFitRange) {
        throw InsufficientRange("classify: N = " + std::to_string(n_max) +
                                " is too small for a tail fit (need >= " +
                                std::to_string(kMinFitRange) + ")");
    }

    const auto terms = criterion_terms(kind, family, n_max);
    report.partial_sums = prefix_sums(terms);

    const auto monotone = check_monotone(family, variant, n_max);
    report.monotone_ok = monotone.nonincreasing;
    report.first_violation = monotone.first_violation;

    // Forward-ratio supremum over the full window and over its first tenth; the
    // ratio counts as bounded when the final decade sets no new record above 1.
    const auto phis = phi_values(family, variant, n_max);
    double running_min = phis[0];
    double sup_all = 0.0, sup_head = 1.0;
    const std::uint64_t head = n_max / 10;
    for (std::uint64_t m = 2; m <= n_max; ++m) {
        sup_all = std::max(sup_all, phis[m - 1] / running_min);
        running_min = std::min(running_min, phis[m - 1]);
        if (m == head) sup_head = std::max(sup_head, sup_all);
    }
    report.ratio_sup = sup_all;
    report.bounded_ratio_ok = sup_all <= sup_head * (1.0 + 1e-9);
    const bool regular = report.monotone_ok || report.bounded_ratio_ok;

    if (n_max >= kMinFitRange) {
        report.tail_fit = fit_tail(terms);
        report.fit_verdict = walk_verdict(report.tail_fit->verdict, regular);
        report.diagnostics["tail_beta"] = report.tail_fit->beta;
        if (report.tail_fit->gamma) report.diagnostics["tail_gamma"] = *report.tail_fit->gamma;
    }

    if (report.analytic_tail) {
        report.series = series_verdict(*report.analytic_tail);
        report.verdict_source = VerdictSource::AnalyticHint;
    } else {
        report.series = report.tail_fit->verdict;
        report.verdict_source = VerdictSource::TailFit;
    }
    report.verdict = walk_verdict(report.series, regular);

    report.pruning = pruning_diagnostics(family, n_max);
    report.diagnostics["partial_sum_final"] = report.partial_sums.back();
    report.diagnostics["ratio_sup"] = report.ratio_sup;
    report.diagnostics["pruned_intervals"] = static_cast<double>(report.pruning.pruned);
    report.diagnostics["unpruned_intervals"] = static_cast<double>(report.pruning.unpruned);
    report.diagnostics["pruning_c0"] = report.pruning.correction_c0;
    return report;
}

GapVerdict dimension_gap_check(std::vector<int> dims) {
    if (dims.empty()) throw InvalidArgument("dimension list is empty");
    std::sort(dims.begin(), dims.end());
    if (dims.front() < 1) throw InvalidArgument("dimensions must be positive integers");
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] == dims[i - 1])
            throw InvalidArgument("dimension " + std::to_string(dims[i]) + " listed twice");
    if (dims.front() > 2) return GapVerdict::ForcedTransient;
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] - dims[i - 1] > 2) return GapVerdict::ForcedTransient;
    return GapVerdict::ConstructibleRecurrent;
}

Lemma46Result lemma46_partial_sums(const Sequence& b_seq, std::uint64_t n_max) {
    if (n_max < 2) throw InvalidArgument("lemma46: N must be >= 2");
    Lemma46Result out;
    out.terms.reserve(n_max);
    CompensatedSum total;
    double prev_total = 0.0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const double b = b_seq(n);
        total += b;
        const double big_b = total.value();
        // the n = 1 term uses B_1 in place of the empty B_0
        const double head = 1.0 / std::sqrt(n == 1 ? big_b : prev_total);
        const double tail = std::sqrt(b / big_b) / static_cast<double>(n);
        out.terms.push_back(std::min(head, tail));
        prev_total = big_b;
    }
    out.partial_sums = prefix_sums(out.terms);
    if (n_max >= 8) {
        auto block = [&](std::uint64_t lo, std::uint64_t hi) {
            CompensatedSum s;
            for (std::uint64_t n = lo + 1; n <= hi; ++n) s += out.terms[n - 1];
            return s.value();
        };
        const std::array<double, 3> inc{block(n_max / 8, n_max / 4), block(n_max / 4, n_max / 2),
                                        block(n_max / 2, n_max)};
        out.doubling_increments = inc;
        out.bounded_heuristic = inc[0] > inc[1] && inc[1] > inc[2];
    }
    return out;
}

double pair_inverse_sqrt_sum(double count, double c, double d) {
    auto f = [&](double x) { return 1.0 / std::sqrt((c + x) * (d + x)); };
    constexpr double kDirect = 1 << 20;
    constexpr double kHead = 1024.0;
    CompensatedSum s;
    if (count <= kDirect) {
        for (double j = 1.0; j <= count; j += 1.0) s += f(j);
        return s.value();
    }
    for (double j = 1.0; j <= kHead; j += 1.0) s += f(j);
    // Euler-Maclaurin on [x0, x1]; the integral of f is 2 log(sqrt(x+c) + sqrt(x+d)).
    const double x0 = kHead + 1.0, x1 = count;
    const double sc0 = std::sqrt(x0 + c), sc1 = std::sqrt(x1 + c);
    const double sd0 = std::sqrt(x0 + d), sd1 = std::sqrt(x1 + d);
    const double du = (x1 - x0) / (sc1 + sc0) + (x1 - x0) / (sd1 + sd0);
    const double integral = 2.0 * std::log1p(du / (sc0 + sd0));
    auto fprime = [&](double x) { return -0.5 * f(x) * (1.0 / (x + c) + 1.0 / (x + d)); };
    s += integral;
    s += 0.5 * (f(x0) + f(x1));
    s += (fprime(x1) - fprime(x0)) / 12.0;
    return s.value();
}

Prop61Result prop61_sums(const Sequence& a_seq, const Sequence& b_seq, std::uint64_t n_max) {
    if (n_max < 2) throw InvalidArgument("prop61: N must be >= 2");
    Prop61Result out;
    out.terms_dumb.reserve(n_max);
    out.terms_t.reserve(n_max);
    CompensatedSum a_total, b_total;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const double a = a_seq(n);
        const double b = b_seq(n);
        if (a > static_cast<double>(kMaterializeCap))
            throw NotMaterializable("a_" + std::to_string(n) + " exceeds the cap 2^53");
        const double b_prev = b_total.value();
        a_total += a;
        b_total += b;
        const double big_a = a_total.value();
        const double big_b = b_total.value();
        // sqrt(A + B_n) - sqrt(A + B_{n-1}) = b_n / (sqrt(A + B_n) + sqrt(A + B_{n-1}))
        const double gap = b / (std::sqrt(big_a + big_b) + std::sqrt(big_a + b_prev));
        out.terms_dumb.push_back(gap / (std::sqrt(big_a) * std::sqrt(b)));
        // log a_n is 0 for a_n = 1; log 2 is used there
        const double log_a = std::log(std::max(a, 2.0));
        out.terms_t.push_back(pair_inverse_sqrt_sum(a, big_b + big_a, big_a) / log_a);
    }
    out.sum_dumb = prefix_sums(out.terms_dumb);
    out.sum_t = prefix_sums(out.terms_t);
    if (n_max >= 20) {
        out.fit_dumb = fit_tail(out.terms_dumb);
        out.fit_t = fit_tail(out.terms_t);
        out.verdict_dumb = out.fit_dumb->verdict;
        out.verdict_t = out.fit_t->verdict;
    }
    out.transient = out.verdict_dumb == SeriesVerdict::Convergent &&
                    out.verdict_t == SeriesVerdict::Convergent;
    return out;
}

std::vector<double> expected_visits_partial_sum(WalkKind kind, const ScheduleFamily& family,
                                                std::uint64_t n_max) {
    if (kind != WalkKind::Z2inZ3)
        throw InvalidArgument("expected_visits_partial_sum is defined for z2z3 only");
    if (n_max < 2) throw InvalidArgument("expected_visits_partial_sum: N must be >= 2");
    return criterion_partial_sums(kind, family, n_max);
}

}  // namespace rwvd

#include "rwvd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rwvd/errors.hpp"
#include "rwvd/numeric.hpp"
#include "rwvd/parallel.hpp"
#include "rwvd/rng.hpp"

namespace rwvd {

double DPTable::at(std::int64_t x) const {
    if (dimension != 1) throw InvalidArgument("DPTable::at(x) on a 2D table");
    if (std::abs(x) > radius) return 0.0;
    return prob[static_cast<std::size_t>(x + radius)];
}

double DPTable::at(std::int64_t x, std::int64_t y) const {
    if (dimension != 2) throw InvalidArgument("DPTable::at(x, y) on a 1D table");
    if (std::abs(x) > radius || std::abs(y) > radius) return 0.0;
    return prob[static_cast<std::size_t>((y + radius) * width() + (x + radius))];
}

double DPTable::total() const {
    CompensatedSum s;
    for (double p : prob) s += p;
    s += absorbed_mass;
    s += truncated_mass;
    return s.value();
}

namespace {

using Pmf = std::vector<std::pair<std::int64_t, double>>;

Pmf positive_support(const Marginal& m) {
    Pmf out;
    for (const auto& [offset, p] : m.pmf)
        if (p > 0.0) out.emplace_back(offset, p);
    return out;
}

// Dense forward evolution on [-R, R]^dim for a product law, dim in {1, 2}.
class DenseWalk {
public:
    DenseWalk(const LatticeDistribution& dist, std::int64_t radius) {
        table_.dimension = dist.dimension();
        table_.radius = radius;
        for (const auto& m : dist.marginals) {
            pmfs_.push_back(positive_support(m));
            reach_.push_back(m.max_abs_offset());
        }
        const auto w = static_cast<std::size_t>(table_.width());
        table_.prob.assign(table_.dimension == 1 ? w : w * w, 0.0);
        scratch_.assign(table_.prob.size(), 0.0);
        lo_.assign(static_cast<std::size_t>(table_.dimension), 0);
        hi_.assign(static_cast<std::size_t>(table_.dimension), 0);
        origin_() = 1.0;
    }

    void step() {
        if (table_.dimension == 1)
            convolve_axis(0, 1, 1);
        else {
            const auto w = table_.width();
            // x pass over the active rows, then y pass over the active columns
            convolve_axis(0, 1, w);
            convolve_axis(1, w, 1);
        }
        ++table_.k;
    }

    double absorb_origin() {
        const double m = origin_();
        origin_() = 0.0;
        table_.absorbed_mass += m;
        return m;
    }

    double origin() { return origin_(); }
    const DPTable& table() const { return table_; }
    DPTable release() { return std::move(table_); }

private:
    double& origin_() {
        const auto r = table_.radius;
        const auto idx = table_.dimension == 1 ? r : r * table_.width() + r;
        return table_.prob[static_cast<std::size_t>(idx)];
    }

    // Convolves along `axis`; `stride` steps along it, `line_stride` between lines.
    void convolve_axis(std::size_t axis, std::int64_t stride, std::int64_t line_stride) {
        const auto r = table_.radius;
        const auto& pmf = pmfs_[axis];
        auto& src = table_.prob;
        std::int64_t line_lo = 0, line_hi = 0;
        if (table_.dimension == 2) {
            const std::size_t other = 1 - axis;
            line_lo = lo_[other];
            line_hi = hi_[other];
        }
        const std::int64_t new_lo = std::max(-r, lo_[axis] - reach_[axis]);
        const std::int64_t new_hi = std::min(r, hi_[axis] + reach_[axis]);
        CompensatedSum lost;
        for (std::int64_t line = line_lo; line <= line_hi; ++line) {
            const std::int64_t base = table_.dimension == 2 ? (line + r) * line_stride : 0;
            for (std::int64_t x = new_lo; x <= new_hi; ++x)
                scratch_[static_cast<std::size_t>(base + (x + r) * stride)] = 0.0;
            for (std::int64_t x = lo_[axis]; x <= hi_[axis]; ++x) {
                const double v = src[static_cast<std::size_t>(base + (x + r) * stride)];
                if (v == 0.0) continue;
                for (const auto& [s, p] : pmf) {
                    const std::int64_t y = x + s;
                    if (y < -r || y > r)
                        lost += v * p;
                    else
                        scratch_[static_cast<std::size_t>(base + (y + r) * stride)] += v * p;
                }
            }
            for (std::int64_t x = lo_[axis]; x <= hi_[axis]; ++x)
                src[static_cast<std::size_t>(base + (x + r) * stride)] = 0.0;
            for (std::int64_t x = new_lo; x <= new_hi; ++x)
                src[static_cast<std::size_t>(base + (x + r) * stride)] =
                    scratch_[static_cast<std::size_t>(base + (x + r) * stride)];
        }
        lo_[axis] = new_lo;
        hi_[axis] = new_hi;
        table_.truncated_mass += lost.value();
    }

    DPTable table_;
    std::vector<Pmf> pmfs_;
    std::vector<std::int64_t> reach_;
    std::vector<double> scratch_;
    std::vector<std::int64_t> lo_, hi_;  // active box per axis
};

void check_dp_dimension(const LatticeDistribution& dist) {
    if (dist.dimension() != 1 && dist.dimension() != 2)
        throw InvalidArgument("dense DP supports dimension 1 or 2, got " +
                              std::to_string(dist.dimension()));
}

std::int64_t max_reach(const LatticeDistribution& dist) {
    std::int64_t m = 0;
    for (const auto& marg : dist.marginals) m = std::max(m, marg.max_abs_offset());
    return m;
}

void check_steps(const LatticeDistribution& dist, std::uint64_t steps) {
    const auto limit = dist.dimension() == 1 ? kMaxDpSteps1D : kMaxDpSteps2D;
    if (steps > limit)
        throw FeasibilityError("DP horizon " + std::to_string(steps) + " exceeds the " +
                               std::to_string(dist.dimension()) + "D limit " + std::to_string(limit));
}

std::int64_t exact_radius(const LatticeDistribution& dist, std::uint64_t steps) {
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(steps) * max_reach(dist));
}

void check_radius(int dimension, std::int64_t radius) {
    const auto limit = dimension == 1 ? kMaxRadius1D : kMaxRadius2D;
    if (radius < 1) throw InvalidArgument("DP radius must be >= 1");
    if (radius > limit)
        throw FeasibilityError("DP radius " + std::to_string(radius) + " exceeds the " +
                               std::to_string(dimension) + "D memory limit " + std::to_string(limit));
}

// Runs `body(walk, run)` for the chosen radius; in 2D without an explicit radius
// the radius starts near nine standard deviations and doubles until the
// truncated mass is within epsilon.
template <class Body>
DPRun with_radius(const LatticeDistribution& dist, std::uint64_t steps, const DPOptions& opts,
                  Body body) {
    check_dp_dimension(dist);
    validate(dist);
    check_steps(dist, steps);
    const std::int64_t exact = exact_radius(dist, steps);
    std::int64_t radius;
    if (opts.radius)
        radius = *opts.radius;
    else if (dist.dimension() == 1)
        radius = exact;
    else {
        double sigma = 0.0;
        for (const auto& m : dist.marginals) sigma = std::max(sigma, std::sqrt(m.variance()));
        radius = std::min<std::int64_t>(
            exact, static_cast<std::int64_t>(std::ceil(9.0 * sigma * std::sqrt(static_cast<double>(steps)))) +
                       max_reach(dist));
        radius = std::max<std::int64_t>(radius, 1);
    }
    for (;;) {
        check_radius(dist.dimension(), radius);
        DenseWalk walk(dist, radius);
        DPRun run;
        double last_truncated = 0.0;
        auto track = [&]() {
            const auto& t = walk.table();
            run.max_mass_error = std::max(run.max_mass_error, std::abs(t.total() - 1.0));
            if (t.truncated_mass < last_truncated) run.truncation_monotone = false;
            last_truncated = t.truncated_mass;
        };
        body(walk, run, track);
        run.table = walk.release();
        if (opts.radius || run.table.truncated_mass <= opts.epsilon || radius >= exact) return run;
        radius = std::min(exact, radius * 2);
    }
}

}  // namespace

std::vector<double> return_prob_series(const Marginal& marginal, std::uint64_t kmax) {
    LatticeDistribution dist{{marginal}};
    validate(dist);
    check_steps(dist, kmax);
    const auto radius = exact_radius(dist, kmax);
    check_radius(1, radius);
    DenseWalk walk(dist, radius);
    std::vector<double> out{1.0};
    out.reserve(kmax + 1);
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        walk.step();
        out.push_back(walk.origin());
    }
    return out;
}

double exact_return_prob(const LatticeDistribution& dist, std::uint64_t k) {
    validate(dist);
    double p = 1.0;
    std::vector<std::pair<const Marginal*, double>> cache;
    for (const auto& m : dist.marginals) {
        auto hit = std::find_if(cache.begin(), cache.end(),
                                [&](const auto& e) { return *e.first == m; });
        if (hit == cache.end()) {
            cache.emplace_back(&m, return_prob_series(m, k).back());
            hit = cache.end() - 1;
        }
        p *= hit->second;
    }
    return p;
}

DPRun run_return_dp(const LatticeDistribution& dist, std::uint64_t k, const DPOptions& opts) {
    auto run = with_radius(dist, k, opts, [&](DenseWalk& walk, DPRun&, auto& track) {
        track();
        for (std::uint64_t t = 1; t <= k; ++t) {
            walk.step();
            track();
        }
    });
    run.value = run.table.dimension == 1 ? run.table.at(0) : run.table.at(0, 0);
    return run;
}

DPRun run_hitting_dp(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                     const DPOptions& opts) {
    if (a < 1) throw InvalidArgument("hitting window needs a >= 1");
    if (b < a) throw InvalidArgument("hitting window needs a <= b");
    const std::uint64_t steps = b > a ? b - 1 : 0;
    auto run = with_radius(dist, steps, opts, [&](DenseWalk& walk, DPRun& r, auto& track) {
        track();
        for (std::uint64_t t = 1; t < b; ++t) {
            walk.step();
            if (t >= a) r.absorbed_by_step.push_back(walk.absorb_origin());
            track();
        }
    });
    run.value = run.table.absorbed_mass;
    return run;
}

double exact_hitting_dp(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                        const DPOptions& opts) {
    return run_hitting_dp(dist, a, b, opts).value;
}

HittingEstimate exact_hitting(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                              const DPOptions& opts) {
    return HittingEstimate{exact_hitting_dp(dist, a, b, opts), 0.0, 0, true};
}

HittingEstimate mc_hitting(const LatticeDistribution& dist, std::uint64_t a, std::uint64_t b,
                           std::uint64_t replicas, std::uint64_t seed) {
    validate(dist);
    if (a < 1) throw InvalidArgument("hitting window needs a >= 1");
    if (b < a) throw InvalidArgument("hitting window needs a <= b");
    if (replicas == 0) throw InvalidArgument("replicas must be >= 1");
    if (b > kMaterializeCap) throw NotMaterializable("horizon b exceeds the materialization cap");
    HittingEstimate est;
    est.replicas = replicas;
    if (b == a) return est;

    std::vector<MarginalSampler> samplers;
    for (const auto& m : dist.marginals) samplers.emplace_back(m);
    const auto dim = static_cast<std::uint64_t>(dist.dimension());
    std::vector<std::uint8_t> hit(replicas, 0);
    parallel_chunks(replicas, 256, [&](std::size_t lo, std::size_t hi) {
        std::vector<std::int64_t> pos(dim);
        for (std::size_t r = lo; r < hi; ++r) {
            StepStream stream(seed, r);
            std::fill(pos.begin(), pos.end(), 0);
            for (std::uint64_t k = 1; k < b; ++k) {
                const std::uint64_t base = (k - 1) * dim;
                bool zero = true;
                for (std::uint64_t j = 0; j < dim; ++j) {
                    pos[j] += samplers[j](stream.word(base + j));
                    zero = zero && pos[j] == 0;
                }
                if (zero && k >= a) {
                    hit[r] = 1;
                    break;
                }
            }
        }
    });
    const auto hits = std::count(hit.begin(), hit.end(), std::uint8_t{1});
    const auto n = static_cast<double>(replicas);
    est.p_hat = static_cast<double>(hits) / n;
    est.stderr_p = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);
    return est;
}

LcltFit lclt_exponent_fit(const LatticeDistribution& dist, std::uint64_t k_min, std::uint64_t k_max,
                          int points) {
    const auto report = validate(dist);
    if (k_min < 16) throw InvalidArgument("lclt fit needs k_min >= 16");
    if (k_max <= k_min) throw InvalidArgument("lclt fit needs k_max > k_min");
    if (points < 2) throw InvalidArgument("lclt fit needs at least 2 grid points");
    LcltFit fit;
    for (auto p : report.periods) fit.period = std::lcm(fit.period, p);

    const double ratio = std::pow(static_cast<double>(k_max) / static_cast<double>(k_min),
                                  1.0 / static_cast<double>(points - 1));
    const std::uint64_t first = (k_min + fit.period - 1) / fit.period * fit.period;
    const std::uint64_t last = k_max / fit.period * fit.period;
    if (first >= last) throw InvalidArgument("lclt fit range holds fewer than two admissible k");
    for (int i = 0; i < points; ++i) {
        const double target = static_cast<double>(k_min) * std::pow(ratio, i);
        auto k = static_cast<std::uint64_t>(std::llround(target / static_cast<double>(fit.period))) * fit.period;
        k = std::clamp(k, first, last);
        if (fit.ks.empty() || fit.ks.back() != k) fit.ks.push_back(k);
    }

    std::vector<double> prob(fit.ks.size(), 1.0);
    for (const auto& m : dist.marginals) {
        const auto series = return_prob_series(m, last);
        for (std::size_t i = 0; i < fit.ks.size(); ++i) prob[i] *= series[fit.ks[i]];
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < fit.ks.size(); ++i) {
        if (!(prob[i] > 0.0)) throw Undefined("return probability vanishes at k = " + std::to_string(fit.ks[i]));
        lx.push_back(std::log(static_cast<double>(fit.ks[i])));
        ly.push_back(std::log(prob[i]));
    }
    const auto ls = least_squares(lx, ly);
    fit.slope = ls.slope;
    fit.intercept = ls.intercept;
    fit.residual = ls.residual;
    fit.probs = std::move(prob);
    return fit;
}

double band_reference(int dimension, std::uint64_t a, std::uint64_t b) {
    const auto da = static_cast<double>(a), db = static_cast<double>(b);
    if (dimension == 1) return std::sqrt((db - da) / db);
    if (dimension == 2) return std::log(db / da) / std::log(db);
    throw InvalidArgument("band reference needs dimension 1 or 2");
}

std::vector<GridCell> default_band_grid(int dimension) {
    std::vector<GridCell> grid;
    if (dimension == 1) {
        for (std::uint64_t a = 64; a <= 1024; a *= 2)
            for (std::uint64_t gap : {a / 4, a, 4 * a}) grid.push_back({a, a + gap});
    } else if (dimension == 2) {
        for (std::uint64_t a : {8, 16, 32, 64})
            for (std::uint64_t f : {3, 4, 8}) grid.push_back({a, f * a});
    } else {
        throw InvalidArgument("band grid needs dimension 1 or 2");
    }
    return grid;
}

BoundBandReport bound_band_scan(const LatticeDistribution& dist, int dimension,
                                std::span<const GridCell> grid) {
    if (dimension != 1 && dimension != 2) throw InvalidArgument("band scan needs dimension 1 or 2");
    if (dist.dimension() != dimension)
        throw InvalidArgument("distribution dimension does not match the band dimension");
    validate(dist);
    BoundBandReport report;
    report.dimension = dimension;
    std::vector<GridCell> kept;
    for (const auto& c : grid) {
        if (c.a < 2 || c.b <= c.a) throw InvalidArgument("band cells need 2 <= a < b");
        if (dimension == 2 && c.b <= 2 * c.a)
            ++report.excluded;
        else
            kept.push_back(c);
    }
    if (kept.empty()) throw InvalidArgument("band grid has no admissible cells");
    report.cells.resize(kept.size());
    parallel_chunks(kept.size(), 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto& cell = report.cells[i];
            cell.a = kept[i].a;
            cell.b = kept[i].b;
            cell.p_exact = exact_hitting_dp(dist, cell.a, cell.b);
            cell.reference = band_reference(dimension, cell.a, cell.b);
            cell.ratio = cell.p_exact / cell.reference;
        }
    });
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = 0.0;
    for (const auto& c : report.cells) {
        if (!(c.ratio > 0.0) || !std::isfinite(c.ratio))
            throw Undefined("band ratio is not positive and finite at (a, b) = (" +
                            std::to_string(c.a) + ", " + std::to_string(c.b) + ")");
        report.min_ratio = std::min(report.min_ratio, c.ratio);
        report.max_ratio = std::max(report.max_ratio, c.ratio);
    }
    return report;
}

LatticeDistribution default_law(WalkKind kind) {
    if (kind == WalkKind::Alternating12) return lazy_walk(2);
    return lazy_walk(walk_dims(kind).full);
}

SecondMomentReport second_moment_ratio(WalkKind kind, const ScheduleFamily& family, std::uint64_t M,
                                       std::uint64_t replicas, std::uint64_t seed) {
    return second_moment_ratio(default_law(kind), kind, family, M, replicas, seed);
}

SecondMomentReport second_moment_ratio(const LatticeDistribution& dist, WalkKind kind,
                                       const ScheduleFamily& family, std::uint64_t M,
                                       std::uint64_t replicas, std::uint64_t seed) {
    if (M < 1) throw InvalidArgument("M must be >= 1");
    if (replicas == 0) throw InvalidArgument("replicas must be >= 1");
    std::vector<std::uint64_t> a;
    for (std::uint64_t n = 1; n <= M + 1; ++n) a.push_back(materialize(family, n));

    SecondMomentReport report;
    report.replicas = replicas;
    for (std::uint64_t n = 1; n <= M; ++n)
        if (a[n] >= 2 * a[n - 1]) report.eligible.push_back(n);
    if (report.eligible.empty())
        throw Undefined("no interval with a_{n+1} >= 2 a_n: both moments vanish");

    const auto profile = varying_profile(kind, family, a[M] - 1);
    std::vector<std::vector<std::uint8_t>> flags(replicas);
    parallel_chunks(replicas, 256, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            const auto rec = simulate_rwvd(dist, profile, seed, false, r);
            auto& f = flags[r];
            f.assign(M, 0);
            for (auto n : report.eligible)
                f[n - 1] = rec.per_interval_counts.size() >= n && rec.per_interval_counts[n - 1] > 0;
        }
    });
    std::vector<double> sums(M, 0.0);
    CompensatedSum first, second;
    for (const auto& f : flags) {
        double s = 0.0;
        for (std::uint64_t n = 0; n < M; ++n) {
            s += f[n];
            sums[n] += f[n];
        }
        first += s;
        second += s * s;
    }
    const auto R = static_cast<double>(replicas);
    for (double s : sums) report.indicator_means.push_back(s / R);
    report.first_moment = first.value() / R;
    report.second_moment = second.value() / R;
    if (report.first_moment == 0.0) throw Undefined("no eligible interval saw a return: ratio is 0/0");
    report.ratio = report.second_moment / (report.first_moment * report.first_moment);
    return report;
}

}  // namespace rwvd

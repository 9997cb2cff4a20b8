#include "rwvd/lattice_walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rwvd/errors.hpp"
#include "rwvd/numeric.hpp"
#include "rwvd/parallel.hpp"

namespace rwvd {

namespace {

constexpr double kPmfTolerance = 1e-12;
constexpr std::size_t kReplicaChunk = 256;

}  // namespace

double Marginal::mean() const {
    CompensatedSum s;
    for (const auto& [offset, p] : pmf) s += p * static_cast<double>(offset);
    return s.value();
}

double Marginal::variance() const {
    const double m = mean();
    CompensatedSum s;
    for (const auto& [offset, p] : pmf) {
        const double d = static_cast<double>(offset) - m;
        s += p * d * d;
    }
    return s.value();
}

std::int64_t Marginal::max_abs_offset() const {
    std::int64_t out = 0;
    for (const auto& [offset, p] : pmf)
        if (p > 0.0) out = std::max(out, std::abs(offset));
    return out;
}

LatticeDistribution simple_walk(int dimension) {
    if (dimension < 1) throw InvalidArgument("dimension must be >= 1");
    return LatticeDistribution{std::vector<Marginal>(
        static_cast<std::size_t>(dimension), Marginal{{{-1, 0.5}, {1, 0.5}}})};
}

LatticeDistribution lazy_walk(int dimension, double hold) { return lazify(simple_walk(dimension), hold); }

bool ValidationReport::aperiodic() const {
    return std::all_of(periods.begin(), periods.end(), [](std::uint64_t p) { return p == 1; });
}

std::uint64_t marginal_period(const Marginal& marginal) {
    std::vector<std::int64_t> support;
    for (const auto& [offset, p] : marginal.pmf)
        if (p > 0.0) support.push_back(offset);
    if (support.size() < 2) return 0;
    std::uint64_t g = 0;
    for (auto s : support) g = std::gcd(g, static_cast<std::uint64_t>(std::abs(s - support[0])));
    // every step is congruent to support[0] modulo g
    const auto residue = static_cast<std::uint64_t>(((support[0] % static_cast<std::int64_t>(g)) +
                                                     static_cast<std::int64_t>(g)) %
                                                    static_cast<std::int64_t>(g));
    return g / std::gcd(g, residue);
}

ValidationReport validate(const LatticeDistribution& dist) {
    if (dist.marginals.empty()) throw InvalidDistribution("distribution has no coordinates");
    ValidationReport report;
    for (std::size_t j = 0; j < dist.marginals.size(); ++j) {
        const auto& m = dist.marginals[j];
        const std::string where = "coordinate " + std::to_string(j);
        CompensatedSum total;
        std::size_t support = 0;
        for (const auto& [offset, p] : m.pmf) {
            if (!std::isfinite(p) || p < 0.0)
                throw InvalidDistribution(where + ": probabilities must be finite and non-negative");
            total += p;
            if (p > 0.0) ++support;
        }
        if (std::abs(total.value() - 1.0) > kPmfTolerance)
            throw InvalidDistribution(where + ": probabilities sum to " +
                                      std::to_string(total.value()) + ", not 1");
        if (std::abs(m.mean()) > kPmfTolerance)
            throw InvalidDistribution(where + ": mean is " + std::to_string(m.mean()) + ", not 0");
        if (support < 2)
            throw InvalidDistribution(where + ": degenerate marginal (support size < 2)");
        const auto period = marginal_period(m);
        report.periods.push_back(period);
        if (period != 1)
            report.warnings.push_back(where + ": periodic with period " + std::to_string(period));
    }
    return report;
}

LatticeDistribution lazify(const LatticeDistribution& dist, double hold) {
    if (!(hold >= 0.0 && hold < 1.0)) throw InvalidArgument("lazify: hold must lie in [0, 1)");
    LatticeDistribution out;
    for (const auto& m : dist.marginals) {
        Marginal lazy;
        bool has_zero = false;
        for (const auto& [offset, p] : m.pmf) {
            double q = (1.0 - hold) * p;
            if (offset == 0) {
                q += hold;
                has_zero = true;
            }
            lazy.pmf.emplace_back(offset, q);
        }
        if (!has_zero) lazy.pmf.emplace_back(0, hold);
        std::sort(lazy.pmf.begin(), lazy.pmf.end());
        out.marginals.push_back(std::move(lazy));
    }
    return out;
}

LatticeDistribution project(const LatticeDistribution& dist, int d) {
    if (d < 1 || d > dist.dimension())
        throw InvalidArgument("project: d = " + std::to_string(d) + " outside [1, " +
                              std::to_string(dist.dimension()) + "]");
    return LatticeDistribution{{dist.marginals.begin(), dist.marginals.begin() + d}};
}

MarginalSampler::MarginalSampler(const Marginal& marginal) {
    constexpr double kScale = 4294967296.0;
    double cumulative = 0.0;
    for (const auto& [offset, p] : marginal.pmf) {
        if (p <= 0.0) continue;
        cumulative += p;
        const double t = std::min(kScale, std::round(cumulative * kScale));
        thresholds_.push_back(static_cast<std::uint64_t>(t));
        offsets_.push_back(offset);
    }
    if (offsets_.empty()) throw InvalidDistribution("sampler: empty marginal");
    thresholds_.back() = std::uint64_t{1} << 32;
}

DimensionProfile varying_profile(WalkKind kind, ScheduleFamily schedule, std::uint64_t horizon) {
    const auto dims = walk_dims(kind);
    return DimensionProfile{VaryingDimension{dims.low, dims.full, std::move(schedule)}, horizon};
}

std::uint64_t ReturnRecord::total_returns() const {
    return std::accumulate(per_interval_counts.begin(), per_interval_counts.end(),
                           returns_before_schedule);
}

namespace {

std::vector<MarginalSampler> make_samplers(const LatticeDistribution& dist) {
    std::vector<MarginalSampler> out;
    out.reserve(dist.marginals.size());
    for (const auto& m : dist.marginals) out.emplace_back(m);
    return out;
}

bool at_origin(const std::vector<std::int64_t>& pos) {
    return std::all_of(pos.begin(), pos.end(), [](std::int64_t x) { return x == 0; });
}

void check_varying(const LatticeDistribution& dist, const VaryingDimension& v) {
    if (v.low < 1 || v.low > v.full)
        throw InvalidArgument("varying dimension profile needs 1 <= d <= D");
    if (dist.dimension() != v.full)
        throw InvalidArgument("distribution dimension " + std::to_string(dist.dimension()) +
                              " does not match D = " + std::to_string(v.full));
}

ReturnRecord run_varying(std::span<const MarginalSampler> samplers, int low, int full,
                         std::span<const std::uint64_t> schedule, std::uint64_t horizon,
                         std::uint64_t seed, std::uint64_t replica, bool trace) {
    ReturnRecord rec;
    rec.seed = seed;
    rec.replica = replica;
    rec.final_position.assign(static_cast<std::size_t>(full), 0);
    rec.per_interval_counts.assign(schedule.size(), 0);
    StepStream stream(seed, replica);
    auto& pos = rec.final_position;
    std::size_t next = 0;  // schedule points already passed
    const auto stride = static_cast<std::uint64_t>(full);
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        int active = low;
        if (next < schedule.size() && schedule[next] == k) {
            ++next;
            active = full;
        }
        const std::uint64_t base = (k - 1) * stride;
        for (int j = 0; j < active; ++j)
            pos[static_cast<std::size_t>(j)] +=
                samplers[static_cast<std::size_t>(j)](stream.word(base + static_cast<std::uint64_t>(j)));
        if (at_origin(pos)) {
            if (next == 0)
                ++rec.returns_before_schedule;
            else
                ++rec.per_interval_counts[next - 1];
            if (trace) {
                rec.return_times.push_back(k);
                rec.return_intervals.push_back(next);
            }
        }
    }
    rec.steps_taken = horizon;
    return rec;
}

struct AltBlockCursor {
    const Sequence& a_seq;
    const Sequence& b_seq;
    std::uint64_t block = 0;       // 1-based block index; odd = diagonal
    std::uint64_t block_end = 1;   // first step after the current block

    // Advance so that step k lies in the current block.
    void seek(std::uint64_t k) {
        while (k >= block_end) {
            ++block;
            const std::uint64_t n = (block + 1) / 2;
            const double len = (block % 2 == 1) ? a_seq(n) : b_seq(n);
            const double end = static_cast<double>(block_end) + len;
            block_end = end >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                                      : static_cast<std::uint64_t>(end);
        }
    }
    bool diagonal() const { return block % 2 == 1; }
};

std::uint64_t count_alt_blocks(const Sequence& a_seq, const Sequence& b_seq, std::uint64_t horizon) {
    if (horizon == 0) return 0;
    AltBlockCursor cur{a_seq, b_seq};
    cur.seek(horizon);
    return cur.block;
}

ReturnRecord run_alternating(const Sequence& a_seq, const Sequence& b_seq, std::uint64_t horizon,
                             std::uint64_t blocks, std::uint64_t seed, std::uint64_t replica,
                             bool trace) {
    ReturnRecord rec;
    rec.seed = seed;
    rec.replica = replica;
    rec.final_position.assign(2, 0);
    rec.per_interval_counts.assign(blocks, 0);
    StepStream stream(seed, replica);
    AltBlockCursor cur{a_seq, b_seq};
    std::int64_t x = 0, y = 0;
    constexpr std::uint32_t kHalf = 0x80000000u;
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        cur.seek(k);
        const std::uint64_t base = 2 * (k - 1);
        x += stream.word(base) < kHalf ? -1 : 1;
        if (cur.diagonal()) y += stream.word(base + 1) < kHalf ? -1 : 1;
        if (x == 0 && y == 0) {
            ++rec.per_interval_counts[cur.block - 1];
            if (trace) {
                rec.return_times.push_back(k);
                rec.return_intervals.push_back(cur.block);
            }
        }
    }
    rec.final_position = {x, y};
    rec.steps_taken = horizon;
    return rec;
}

}  // namespace

ReturnRecord simulate_rwvd(const LatticeDistribution& dist, const DimensionProfile& profile,
                           std::uint64_t seed, bool record_trace, std::uint64_t replica) {
    if (const auto* alt = std::get_if<AlternatingBlocks>(&profile.mode))
        return simulate_alternating(alt->a_seq, alt->b_seq, profile.horizon, seed, record_trace, replica);
    const auto& v = std::get<VaryingDimension>(profile.mode);
    check_varying(dist, v);
    validate(dist);
    const auto schedule = materialize_upto(v.schedule, profile.horizon);
    const auto samplers = make_samplers(dist);
    return run_varying(samplers, v.low, v.full, schedule, profile.horizon, seed, replica, record_trace);
}

ReturnRecord simulate_homogeneous(const LatticeDistribution& dist, std::uint64_t horizon,
                                  std::uint64_t seed, bool record_trace, std::uint64_t replica) {
    validate(dist);
    const auto samplers = make_samplers(dist);
    const int d = dist.dimension();
    auto rec = run_varying(samplers, d, d, {}, horizon, seed, replica, record_trace);
    return rec;
}

ReturnRecord simulate_alternating(const Sequence& a_seq, const Sequence& b_seq,
                                  std::uint64_t horizon, std::uint64_t seed, bool record_trace,
                                  std::uint64_t replica) {
    if (horizon > kMaterializeCap) throw NotMaterializable("horizon exceeds the materialization cap");
    const auto blocks = count_alt_blocks(a_seq, b_seq, horizon);
    return run_alternating(a_seq, b_seq, horizon, blocks, seed, replica, record_trace);
}

SimulationSummary simulate_replicas(const LatticeDistribution& dist, const DimensionProfile& profile,
                                    std::uint64_t seed, std::uint64_t replicas,
                                    std::vector<TraceRow>* trace) {
    if (replicas == 0) throw InvalidArgument("replicas must be >= 1");
    const std::uint64_t horizon = profile.horizon;
    SimulationSummary summary;
    summary.replicas = replicas;
    summary.horizon = horizon;
    summary.seed = seed;

    std::vector<ReturnRecord> records(replicas);
    const bool want_trace = trace != nullptr;
    // interval boundaries: starts[n-1] = first step of interval n
    std::vector<std::uint64_t> starts;

    if (const auto* alt = std::get_if<AlternatingBlocks>(&profile.mode)) {
        if (horizon > kMaterializeCap) throw NotMaterializable("horizon exceeds the materialization cap");
        const auto blocks = count_alt_blocks(alt->a_seq, alt->b_seq, horizon);
        AltBlockCursor cur{alt->a_seq, alt->b_seq};
        std::uint64_t k = 1;
        while (cur.block < blocks) {
            cur.seek(k);
            starts.push_back(k);
            k = cur.block_end;
        }
        parallel_chunks(replicas, kReplicaChunk, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r)
                records[r] = run_alternating(alt->a_seq, alt->b_seq, horizon, blocks, seed, r, want_trace);
        });
    } else {
        const auto& v = std::get<VaryingDimension>(profile.mode);
        check_varying(dist, v);
        validate(dist);
        starts = materialize_upto(v.schedule, horizon);
        const auto samplers = make_samplers(dist);
        parallel_chunks(replicas, kReplicaChunk, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r)
                records[r] = run_varying(samplers, v.low, v.full, starts, horizon, seed, r, want_trace);
        });
    }

    const std::size_t intervals = starts.size();
    const auto dims = records.front().final_position.size();
    std::vector<CompensatedSum> pos_sum(dims), pos_sq(dims);
    std::vector<double> sum(intervals, 0.0), sum_sq(intervals, 0.0);
    std::vector<std::uint64_t> hits(intervals, 0);
    for (const auto& rec : records) {
        const auto total = rec.total_returns();
        summary.total_returns += total;
        summary.returns_before_schedule += rec.returns_before_schedule;
        if (total > 0) ++summary.replicas_with_return;
        for (std::size_t i = 0; i < intervals; ++i) {
            const auto c = static_cast<double>(rec.per_interval_counts[i]);
            sum[i] += c;
            sum_sq[i] += c * c;
            if (rec.per_interval_counts[i] > 0) ++hits[i];
        }
        for (std::size_t j = 0; j < dims; ++j) {
            const auto x = static_cast<double>(rec.final_position[j]);
            pos_sum[j] += x;
            pos_sq[j] += x * x;
        }
        if (trace)
            for (std::size_t i = 0; i < rec.return_times.size(); ++i)
                trace->push_back({rec.replica, rec.return_times[i], rec.return_intervals[i]});
    }
    const auto r = static_cast<double>(replicas);
    for (std::size_t i = 0; i < intervals; ++i) {
        IntervalStats st;
        st.index = i + 1;
        st.start = starts[i];
        st.end = i + 1 < intervals ? starts[i + 1] : horizon + 1;
        st.mean_returns = sum[i] / r;
        const double var = replicas > 1 ? std::max(0.0, (sum_sq[i] - r * st.mean_returns * st.mean_returns) / (r - 1.0)) : 0.0;
        st.stderr_returns = std::sqrt(var / r);
        st.hit_fraction = static_cast<double>(hits[i]) / r;
        summary.intervals.push_back(st);
    }
    summary.mean_returns = static_cast<double>(summary.total_returns) / r;
    for (std::size_t j = 0; j < dims; ++j) {
        const double m = pos_sum[j].value() / r;
        summary.final_mean.push_back(m);
        summary.final_variance.push_back(replicas > 1 ? (pos_sq[j].value() - r * m * m) / (r - 1.0) : 0.0);
    }
    return summary;
}

void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows) {
    os << kTraceHeader << '\n';
    for (const auto& row : rows) os << row.replica << ',' << row.k << ',' << row.interval_index << '\n';
}

AdaptiveSchedule build_adaptive_schedule(const LatticeDistribution& dist3, int levels, double target,
                                         std::uint64_t replicas, std::uint64_t seed,
                                         std::uint64_t cap, std::uint64_t first) {
    if (dist3.dimension() != 3) throw InvalidArgument("adaptive schedule needs a 3-dimensional law");
    validate(dist3);
    if (levels < 1) throw InvalidArgument("levels must be >= 1");
    if (!(target >= 0.0 && target <= 1.0)) throw InvalidArgument("target must lie in [0, 1]");
    if (replicas == 0) throw InvalidArgument("replicas must be >= 1");
    if (first < 2) throw InvalidArgument("first schedule value must be >= 2");
    if (target >= 1.0)
        throw CapExceeded("target 1 is unreachable: a walk with non-degenerate steps avoids the "
                          "plane's origin over any finite window with positive probability");

    const auto samplers = make_samplers(project(dist3, 2));
    struct State {
        std::int64_t x = 0, y = 0;
        bool hit = false;
    };
    std::vector<State> states(replicas);
    std::uint64_t now = 0;  // all replicas have taken `now` steps

    auto advance = [&](std::uint64_t to, std::uint64_t window_start) {
        parallel_chunks(replicas, kReplicaChunk, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r) {
                StepStream stream(seed, r);
                auto& s = states[r];
                for (std::uint64_t k = now + 1; k <= to; ++k) {
                    const std::uint64_t base = (k - 1) * 3;
                    s.x += samplers[0](stream.word(base));
                    s.y += samplers[1](stream.word(base + 1));
                    if (k > window_start && s.x == 0 && s.y == 0) s.hit = true;
                }
            }
        });
        now = to;
    };

    std::vector<std::uint64_t> values{first};
    AdaptiveSchedule out;
    for (int level = 0; level < levels; ++level) {
        const std::uint64_t a = values.back();
        if (now < a) advance(a, a);
        for (auto& s : states) s.hit = false;
        std::uint64_t delta = 1;
        for (;;) {
            if (delta > cap || a > cap - delta)
                throw CapExceeded("level " + std::to_string(level + 1) + ": no horizon <= cap " +
                                  std::to_string(cap) + " reaches target " + std::to_string(target) +
                                  " (last estimate at a_n + " + std::to_string(delta / 2) + ")");
            advance(a + delta, a);
            const auto hits = static_cast<double>(
                std::count_if(states.begin(), states.end(), [](const State& s) { return s.hit; }));
            const double p = hits / static_cast<double>(replicas);
            if (p >= target) {
                out.levels.push_back({a, a + delta, p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicas))});
                values.push_back(a + delta);
                break;
            }
            delta *= 2;
        }
    }
    out.family = ScheduleFamily::adaptive(values);
    return out;
}

}  // namespace rwvd

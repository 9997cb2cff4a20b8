#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "command_table.hpp"
#include "rwvd/cli.hpp"
#include "rwvd/criteria.hpp"
#include "rwvd/errors.hpp"
#include "rwvd/estimators.hpp"
#include "rwvd/lattice_walk.hpp"

namespace rwvd::cli {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
    double d = 0.0;
    auto [p2, e2] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (e2 == std::errc() && p2 == s.data() + s.size() && d >= 0.0 && d < 1.8e19 && d == std::floor(d))
        return static_cast<std::uint64_t>(d);
    return std::nullopt;
}

std::optional<double> parse_real(const std::string& s) {
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(d)) return d;
    return std::nullopt;
}

std::optional<bool> parse_flag(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    return std::nullopt;
}

[[noreturn]] void config_fail(const std::string& key, const std::string& what) {
    throw ConfigError("--" + key + ": " + what);
}

// Runs `f`, turning argument errors into configuration errors on `key`.
template <class F>
auto as_config(const std::string& key, F f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        config_fail(key, e.what());
    } catch (const InvalidDistribution& e) {
        config_fail(key, e.what());
    }
}

}  // namespace

Params::Params(const CommandSpec& spec, std::map<std::string, std::string> values)
    : spec_(&spec), values_(std::move(values)) {
    for (const auto& [key, value] : values_) {
        const auto it = std::find_if(spec.options.begin(), spec.options.end(),
                                     [&](const OptionSpec& o) { return o.key == key; });
        if (it == spec.options.end())
            throw ConfigError("unknown option \"" + key + "\" for command " + spec.name);
        bool ok = true;
        switch (it->type) {
            case OptionType::Unsigned: ok = parse_u64(value).has_value(); break;
            case OptionType::Real: ok = parse_real(value).has_value(); break;
            case OptionType::Flag: ok = parse_flag(value).has_value(); break;
            case OptionType::Text: ok = true; break;
        }
        if (!ok) config_fail(key, "invalid value \"" + value + "\"");
        if (!it->choices.empty() &&
            std::find(it->choices.begin(), it->choices.end(), value) == it->choices.end()) {
            std::string list;
            for (const auto& c : it->choices) list += (list.empty() ? "" : "|") + c;
            config_fail(key, "\"" + value + "\" is not one of " + list);
        }
    }
    for (const auto& o : spec.options)
        if (o.required && !values_.count(o.key)) config_fail(o.key, "required option missing");
}

const OptionSpec& Params::option(const std::string& key) const {
    for (const auto& o : spec_->options)
        if (o.key == key) return o;
    throw std::logic_error("undeclared option " + key);
}

bool Params::has(const std::string& key) const {
    return values_.count(key) > 0 || option(key).default_value.has_value();
}

std::optional<std::string> Params::maybe(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    return option(key).default_value;
}

std::string Params::text(const std::string& key) const {
    auto v = maybe(key);
    if (!v) config_fail(key, "required option missing");
    return *v;
}

std::uint64_t Params::u64(const std::string& key) const { return *parse_u64(text(key)); }
double Params::real(const std::string& key) const { return *parse_real(text(key)); }
bool Params::flag(const std::string& key) const {
    auto v = maybe(key);
    return v && *parse_flag(*v);
}

json Params::echo() const {
    json out = json::object();
    for (const auto& o : spec_->options) {
        if (!o.echo) continue;
        const auto v = maybe(o.key);
        if (!v) continue;
        switch (o.type) {
            case OptionType::Unsigned: out[o.key] = *parse_u64(*v); break;
            case OptionType::Real: out[o.key] = *parse_real(*v); break;
            case OptionType::Flag: out[o.key] = *parse_flag(*v); break;
            case OptionType::Text: out[o.key] = *v; break;
        }
    }
    return out;
}

namespace {

// ---- shared option groups -------------------------------------------------

const std::vector<std::string> kFamilyNames = {"doubleexp-sqrt", "doubleexp-theta", "singleexp",
                                               "exp-polylog",    "geometric",       "power",
                                               "explicit"};

std::vector<OptionSpec> family_options(bool required) {
    return {
        {"family", OptionType::Text, "schedule family", std::nullopt, kFamilyNames, required},
        {"theta", OptionType::Real, "exponent for doubleexp-theta, in (0,1)"},
        {"alpha", OptionType::Real, "log power for exp-polylog, > 0"},
        {"ratio", OptionType::Real, "ratio for geometric, > 1"},
        {"power", OptionType::Real, "exponent for power, >= 1"},
        {"file", OptionType::Text, "schedule values for explicit, one per line"},
    };
}

std::vector<OptionSpec> with_common(std::vector<OptionSpec> opts, const std::string& default_format,
                                    bool csv_capable) {
    std::vector<std::string> formats{"json"};
    if (csv_capable) formats.push_back("csv");
    opts.push_back({"format", OptionType::Text, "output format", default_format, formats});
    opts.push_back({"output", OptionType::Text, "output path (default: stdout)", std::nullopt, {}, false, false});
    opts.push_back({"timing", OptionType::Flag, "add wall_time_s to the JSON envelope", std::nullopt, {}, false, false});
    return opts;
}

double require_real(const Params& p, const std::string& key, const std::string& family) {
    if (!p.maybe(key)) config_fail(key, "required for family " + family);
    return p.real(key);
}

ScheduleFamily family_from(const Params& p) {
    const auto name = p.text("family");
    return as_config("family", [&]() -> ScheduleFamily {
        if (name == "doubleexp-sqrt") return ScheduleFamily::double_exp_sqrt();
        if (name == "singleexp") return ScheduleFamily::single_exp();
        if (name == "doubleexp-theta")
            return as_config("theta", [&] { return ScheduleFamily::double_exp_theta(require_real(p, "theta", name)); });
        if (name == "exp-polylog")
            return as_config("alpha", [&] { return ScheduleFamily::exp_poly_log(require_real(p, "alpha", name)); });
        if (name == "geometric")
            return as_config("ratio", [&] { return ScheduleFamily::geometric(require_real(p, "ratio", name)); });
        if (name == "power")
            return as_config("power", [&] { return ScheduleFamily::power_law(require_real(p, "power", name)); });
        const auto path = p.maybe("file");
        if (!path) config_fail("file", "required for family explicit");
        return as_config("file", [&] {
            return ScheduleFamily::explicit_values(read_integer_file(*path, {true, 2}));
        });
    });
}

LatticeDistribution law_from(const Params& p, int dim) {
    const double hold = p.real("hold");
    if (!(hold >= 0.0 && hold < 1.0)) config_fail("hold", "must lie in [0, 1)");
    return hold == 0.0 ? simple_walk(dim) : lazy_walk(dim, hold);
}

OptionSpec hold_option(const std::string& def) {
    return {"hold", OptionType::Real, "lazy holding probability in [0,1); 0 gives the simple walk", def};
}

int dim_from(const Params& p) { return p.text("dim") == "1" ? 1 : 2; }

Sequence sequence_from(const Params& p, const std::string& key) {
    return as_config(key, [&] { return parse_sequence_spec(p.text(key)); });
}

std::uint64_t positive(const Params& p, const std::string& key) {
    const auto v = p.u64(key);
    if (v == 0) config_fail(key, "must be >= 1");
    return v;
}

void add_warnings(CommandResult& r, const LatticeDistribution& dist) {
    for (auto& w : validate(dist).warnings) r.warnings.push_back(std::move(w));
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json tail_fit_json(const std::optional<TailFit>& fit) {
    if (!fit) return nullptr;
    return json{{"beta", fit->beta},
                {"gamma", nullable(fit->gamma)},
                {"verdict", to_string(fit->verdict)},
                {"window_begin", fit->window_begin},
                {"window_end", fit->window_end}};
}

// Values at n = 1, 10, 100, ... and at the last index.
json sampled(const std::vector<double>& series) {
    json rows = json::array();
    for (std::uint64_t n = 1; n <= series.size(); n *= 10) {
        rows.push_back({{"n", n}, {"value", series[n - 1]}});
        if (n == series.size()) return rows;
    }
    if (!series.empty()) rows.push_back({{"n", series.size()}, {"value", series.back()}});
    return rows;
}

// ---- handlers --------------------------------------------------------------

CommandResult cmd_classify(const Params& p) {
    const auto kind = *parse_walk_kind(p.text("walk"));
    const auto family = family_from(p);
    const auto n = positive(p, "nmax");
    const auto rep = classify(kind, family, n);
    CommandResult r;
    auto& out = r.payload;
    out["walk"] = to_string(rep.walk_kind);
    out["family"] = rep.family;
    out["n_evaluated"] = rep.n_evaluated;
    out["verdict"] = to_string(rep.verdict);
    out["verdict_source"] = to_string(rep.verdict_source);
    out["fit_verdict"] = rep.fit_verdict ? json(to_string(*rep.fit_verdict)) : json(nullptr);
    out["series"] = to_string(rep.series);
    out["tail_exponent_fit"] = rep.tail_fit ? json(rep.tail_fit->beta) : json(nullptr);
    out["tail_fit"] = tail_fit_json(rep.tail_fit);
    out["analytic_tail"] = rep.analytic_tail
                               ? json{{"beta", rep.analytic_tail->beta}, {"gamma", rep.analytic_tail->gamma}}
                               : json(nullptr);
    out["monotone_ok"] = rep.monotone_ok;
    out["first_violation"] = rep.first_violation ? json(*rep.first_violation) : json(nullptr);
    out["ratio_sup"] = rep.ratio_sup;
    out["bounded_ratio_ok"] = rep.bounded_ratio_ok;
    out["pruning"] = {{"pruned", rep.pruning.pruned},
                      {"unpruned", rep.pruning.unpruned},
                      {"correction_c0", rep.pruning.correction_c0}};
    out["diagnostics"] = json(rep.diagnostics);
    out["partial_sums"] = sampled(rep.partial_sums);
    std::ostringstream csv;
    csv << "n,partial_sum\n";
    for (std::size_t i = 0; i < rep.partial_sums.size(); ++i) csv << i + 1 << ',' << fmt(rep.partial_sums[i]) << '\n';
    r.csv = csv.str();
    return r;
}

CommandResult cmd_phi(const Params& p) {
    const auto family = family_from(p);
    const auto kind = p.text("kind") == "phi1" ? PhiKind::Phi1 : PhiKind::Phi;
    const auto from = positive(p, "n-from");
    const auto to = p.u64("n-to");
    if (to < from) config_fail("n-to", "must be >= n-from");
    const auto rows = phi_table(family, kind, from, to);
    CommandResult r;
    std::ostringstream csv;
    csv << "n,value\n";
    json list = json::array();
    for (const auto& row : rows) {
        csv << row.n << ',' << fmt(row.value) << '\n';
        list.push_back({{"n", row.n}, {"value", row.value}});
    }
    r.payload = {{"family", family.describe()}, {"kind", to_string(kind)}, {"rows", list}};
    r.csv = csv.str();
    return r;
}

CommandResult cmd_simulate(const Params& p) {
    const auto kind = *parse_walk_kind(p.text("walk"));
    const auto horizon = p.u64("horizon");
    const auto replicas = positive(p, "replicas");
    const auto seed = p.u64("seed");
    CommandResult r;
    LatticeDistribution dist;
    DimensionProfile profile;
    if (kind == WalkKind::Alternating12) {
        if (!p.maybe("a-seq")) config_fail("a-seq", "required for walk alt");
        if (!p.maybe("b-seq")) config_fail("b-seq", "required for walk alt");
        profile = DimensionProfile{AlternatingBlocks{sequence_from(p, "a-seq"), sequence_from(p, "b-seq")}, horizon};
        dist = simple_walk(2);
    } else {
        if (!p.maybe("family")) config_fail("family", "required for walk " + p.text("walk"));
        profile = varying_profile(kind, family_from(p), horizon);
        dist = law_from(p, walk_dims(kind).full);
        add_warnings(r, dist);
    }
    std::vector<TraceRow> trace;
    const auto trace_path = p.maybe("trace");
    const auto s = simulate_replicas(dist, profile, seed, replicas, trace_path ? &trace : nullptr);
    json intervals = json::array();
    for (const auto& iv : s.intervals)
        intervals.push_back({{"index", iv.index},
                             {"start", iv.start},
                             {"end", iv.end},
                             {"mean_returns", iv.mean_returns},
                             {"stderr", iv.stderr_returns},
                             {"hit_fraction", iv.hit_fraction}});
    r.payload = {{"walk", to_string(kind)},
                 {"replicas", s.replicas},
                 {"horizon", s.horizon},
                 {"seed", s.seed},
                 {"total_returns", s.total_returns},
                 {"mean_returns", s.mean_returns},
                 {"returns_before_schedule", s.returns_before_schedule},
                 {"replicas_with_return", s.replicas_with_return},
                 {"final_mean", s.final_mean},
                 {"final_variance", s.final_variance},
                 {"intervals", intervals}};
    if (trace_path) {
        std::ostringstream os;
        write_trace_csv(os, trace);
        r.side_files.push_back({*trace_path, os.str()});
    }
    return r;
}

CommandResult cmd_hitting(const Params& p) {
    const int dim = dim_from(p);
    const auto a = positive(p, "a");
    const auto b = p.u64("b");
    if (b < a) config_fail("b", "must be >= a");
    const auto dist = law_from(p, dim);
    CommandResult r;
    add_warnings(r, dist);
    json out{{"dim", dim}, {"a", a}, {"b", b}, {"hold", p.real("hold")}};
    if (p.flag("exact")) {
        const auto run = b > a ? run_hitting_dp(dist, a, b) : DPRun{};
        out["p_hat"] = run.value;
        out["stderr"] = 0.0;
        out["replicas"] = 0;
        out["exact"] = true;
        out["truncated_mass"] = run.table.truncated_mass;
    } else {
        const auto est = mc_hitting(dist, a, b, positive(p, "replicas"), p.u64("seed"));
        out["p_hat"] = est.p_hat;
        out["stderr"] = est.stderr_p;
        out["replicas"] = est.replicas;
        out["exact"] = false;
    }
    r.payload = out;
    return r;
}

std::vector<double> number_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find(',', pos), text.size());
        const auto tok = text.substr(pos, end - pos);
        const auto v = parse_real(tok);
        if (!v || *v <= 0.0) config_fail(key, "bad grid value \"" + tok + "\" at position " + std::to_string(pos));
        out.push_back(*v);
        pos = end + 1;
    }
    return out;
}

// "a=LIST;gap=LIST" (b = a + f a), "a=LIST;factor=LIST" (b = f a) or "cells=a:b,a:b".
std::vector<GridCell> parse_grid(const std::string& text) {
    std::map<std::string, std::string> parts;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = std::min(text.find(';', pos), text.size());
        const auto item = text.substr(pos, end - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos) config_fail("grid", "expected name=values at position " + std::to_string(pos));
        parts[item.substr(0, eq)] = item.substr(eq + 1);
        pos = end + 1;
    }
    std::vector<GridCell> grid;
    auto as_int = [](double v) { return static_cast<std::uint64_t>(std::llround(v)); };
    if (parts.count("cells")) {
        if (parts.size() != 1) config_fail("grid", "cells= cannot be combined with other keys");
        std::istringstream in(parts["cells"]);
        std::string cell;
        while (std::getline(in, cell, ',')) {
            const auto colon = cell.find(':');
            auto a = colon == std::string::npos ? std::nullopt : parse_u64(cell.substr(0, colon));
            auto b = colon == std::string::npos ? std::nullopt : parse_u64(cell.substr(colon + 1));
            if (!a || !b) config_fail("grid", "bad cell \"" + cell + "\"");
            grid.push_back({*a, *b});
        }
    } else if (parts.count("a") && (parts.count("gap") ^ parts.count("factor")) && parts.size() == 2) {
        const auto as = number_list("grid", parts["a"]);
        const bool gap = parts.count("gap");
        const auto fs = number_list("grid", gap ? parts["gap"] : parts["factor"]);
        for (double a : as)
            for (double f : fs) grid.push_back({as_int(a), gap ? as_int(a + f * a) : as_int(f * a)});
    } else {
        config_fail("grid", "expected a=...;gap=..., a=...;factor=... or cells=a:b,...");
    }
    for (const auto& c : grid)
        if (c.a < 2 || c.b <= c.a) config_fail("grid", "cells need 2 <= a < b");
    return grid;
}

CommandResult cmd_bands(const Params& p) {
    const int dim = dim_from(p);
    const auto grid = p.maybe("grid") ? parse_grid(*p.maybe("grid")) : default_band_grid(dim);
    const auto dist = law_from(p, dim);
    CommandResult r;
    add_warnings(r, dist);
    const auto rep = bound_band_scan(dist, dim, grid);
    std::ostringstream csv;
    csv << kBandHeader << '\n';
    json cells = json::array();
    for (const auto& c : rep.cells) {
        csv << c.a << ',' << c.b << ',' << fmt(c.p_exact) << ',' << fmt(c.reference) << ',' << fmt(c.ratio) << '\n';
        cells.push_back({{"a", c.a}, {"b", c.b}, {"p_exact", c.p_exact}, {"reference", c.reference}, {"ratio", c.ratio}});
    }
    r.csv = csv.str();
    r.payload = {{"dim", dim},
                 {"min_ratio", rep.min_ratio},
                 {"max_ratio", rep.max_ratio},
                 {"spread", rep.spread()},
                 {"excluded", rep.excluded},
                 {"cells", cells}};
    return r;
}

CommandResult cmd_lclt(const Params& p) {
    const int dim = dim_from(p);
    const auto dist = law_from(p, dim);
    CommandResult r;
    add_warnings(r, dist);
    const auto points = p.u64("points");
    if (points < 2 || points > 10000) config_fail("points", "must lie in [2, 10000]");
    const auto fit = as_config("kmin", [&] {
        return lclt_exponent_fit(dist, p.u64("kmin"), p.u64("kmax"), static_cast<int>(points));
    });
    std::ostringstream csv;
    csv << "k,p\n";
    json rows = json::array();
    for (std::size_t i = 0; i < fit.ks.size(); ++i) {
        csv << fit.ks[i] << ',' << fmt(fit.probs[i]) << '\n';
        rows.push_back({{"k", fit.ks[i]}, {"p", fit.probs[i]}});
    }
    r.csv = csv.str();
    r.payload = {{"dim", dim},
                 {"slope", fit.slope},
                 {"intercept", fit.intercept},
                 {"residual", fit.residual},
                 {"period", fit.period},
                 {"points", rows}};
    return r;
}

CommandResult cmd_adaptive(const Params& p) {
    const auto levels = positive(p, "levels");
    const double target = p.real("target");
    if (!(target >= 0.0 && target <= 1.0)) config_fail("target", "must lie in [0, 1]");
    const auto dist = law_from(p, 3);
    CommandResult r;
    add_warnings(r, dist);
    const auto first = p.u64("first");
    if (first < 2) config_fail("first", "must be >= 2");
    const auto sched = build_adaptive_schedule(dist, static_cast<int>(std::min<std::uint64_t>(levels, 1000)),
                                               target, positive(p, "replicas"), p.u64("seed"),
                                               positive(p, "cap"), first);
    json lv = json::array();
    for (std::size_t i = 0; i < sched.levels.size(); ++i) {
        const auto& l = sched.levels[i];
        lv.push_back({{"n", i + 1}, {"start", l.start}, {"end", l.end}, {"p_hat", l.p_hat}, {"stderr", l.stderr_p}});
    }
    r.payload = {{"schedule", sched.family.values()}, {"levels", lv}};
    return r;
}

CommandResult cmd_prop61(const Params& p) {
    const auto a = sequence_from(p, "a-seq");
    const auto b = sequence_from(p, "b-seq");
    const auto n = positive(p, "nmax");
    const auto res = prop61_sums(a, b, n);
    double worst_ratio = 0.0;
    for (std::size_t i = std::max<std::size_t>(1, n / 2); i < res.terms_t.size(); ++i)
        if (res.terms_t[i - 1] > 0.0) worst_ratio = std::max(worst_ratio, res.terms_t[i] / res.terms_t[i - 1]);
    CommandResult r;
    r.payload = {{"a_seq", a.description()},
                 {"b_seq", b.description()},
                 {"nmax", n},
                 {"sum_dumb", res.sum_dumb.back()},
                 {"sum_t", res.sum_t.back()},
                 {"fit_dumb", tail_fit_json(res.fit_dumb)},
                 {"fit_t", tail_fit_json(res.fit_t)},
                 {"verdict_dumb", to_string(res.verdict_dumb)},
                 {"verdict_t", to_string(res.verdict_t)},
                 {"t_ratio_max_upper_half", worst_ratio},
                 {"transient", res.transient},
                 {"partial_sums_dumb", sampled(res.sum_dumb)},
                 {"partial_sums_t", sampled(res.sum_t)}};
    std::ostringstream csv;
    csv << "n,term_dumb,term_t,sum_dumb,sum_t\n";
    for (std::size_t i = 0; i < res.terms_dumb.size(); ++i)
        csv << i + 1 << ',' << fmt(res.terms_dumb[i]) << ',' << fmt(res.terms_t[i]) << ','
            << fmt(res.sum_dumb[i]) << ',' << fmt(res.sum_t[i]) << '\n';
    r.csv = csv.str();
    return r;
}

CommandResult cmd_lemma46(const Params& p) {
    const auto b = sequence_from(p, "b-seq");
    const auto n = positive(p, "nmax");
    const auto res = lemma46_partial_sums(b, n);
    CommandResult r;
    r.payload = {{"b_seq", b.description()},
                 {"nmax", n},
                 {"partial_sum", res.partial_sums.back()},
                 {"doubling_increments", res.doubling_increments ? json(*res.doubling_increments) : json(nullptr)},
                 {"bounded_heuristic", res.bounded_heuristic ? json(*res.bounded_heuristic) : json(nullptr)},
                 {"partial_sums", sampled(res.partial_sums)}};
    std::ostringstream csv;
    csv << "n,term,partial_sum\n";
    for (std::size_t i = 0; i < res.terms.size(); ++i)
        csv << i + 1 << ',' << fmt(res.terms[i]) << ',' << fmt(res.partial_sums[i]) << '\n';
    r.csv = csv.str();
    return r;
}

std::vector<OptionSpec> concat(std::vector<OptionSpec> a, const std::vector<OptionSpec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<CommandSpec> build_table() {
    const OptionSpec dim{"dim", OptionType::Text, "lattice dimension", std::nullopt, {"1", "2"}, true};
    const OptionSpec seed{"seed", OptionType::Unsigned, "64-bit master seed", "0"};
    std::vector<CommandSpec> t;
    t.push_back({"classify", "classify a schedule for a walk kind",
                 with_common(concat({{"walk", OptionType::Text, "walk kind", std::nullopt, {"z2z3", "z2z4", "z1z3"}, true}},
                                    concat(family_options(true), {{"nmax", OptionType::Unsigned, "series length N", std::nullopt, {}, true}})),
                             "json", true),
                 "json", cmd_classify});
    t.push_back({"phi", "tabulate phi or phi1",
                 with_common(concat(family_options(true),
                                    {{"kind", OptionType::Text, "criterion quantity", "phi", {"phi", "phi1"}},
                                     {"n-from", OptionType::Unsigned, "first index", std::nullopt, {}, true},
                                     {"n-to", OptionType::Unsigned, "last index", std::nullopt, {}, true}}),
                             "csv", true),
                 "csv", cmd_phi});
    t.push_back({"simulate", "Monte Carlo replicas of a varying-dimension walk",
                 with_common(concat({{"walk", OptionType::Text, "walk kind", std::nullopt, {"z2z3", "z2z4", "z1z3", "alt"}, true}},
                                    concat(family_options(false),
                                           {{"a-seq", OptionType::Text, "diagonal block lengths (walk alt)"},
                                            {"b-seq", OptionType::Text, "horizontal block lengths (walk alt)"},
                                            {"horizon", OptionType::Unsigned, "number of steps", std::nullopt, {}, true},
                                            {"replicas", OptionType::Unsigned, "replica count", "1000"},
                                            seed,
                                            hold_option("0.5"),
                                            {"trace", OptionType::Text, "return-event CSV path", std::nullopt, {}, false, false}})),
                             "json", false),
                 "json", cmd_simulate});
    t.push_back({"hitting", "probability of visiting the origin at some a <= k < b",
                 with_common({dim,
                              {"a", OptionType::Unsigned, "window start", std::nullopt, {}, true},
                              {"b", OptionType::Unsigned, "window end (exclusive)", std::nullopt, {}, true},
                              {"replicas", OptionType::Unsigned, "replica count", "10000"},
                              seed,
                              {"exact", OptionType::Flag, "exact DP instead of Monte Carlo", "false"},
                              hold_option("0")},
                             "json", false),
                 "json", cmd_hitting});
    t.push_back({"bands", "exact hitting probabilities against the reference bands",
                 with_common({dim,
                              {"grid", OptionType::Text, "a=..;gap=.. | a=..;factor=.. | cells=a:b,.."},
                              hold_option("0.5")},
                             "csv", true),
                 "csv", cmd_bands});
    t.push_back({"lclt", "fit of the return-probability decay exponent",
                 with_common({dim,
                              {"kmin", OptionType::Unsigned, "smallest k", std::nullopt, {}, true},
                              {"kmax", OptionType::Unsigned, "largest k", std::nullopt, {}, true},
                              {"points", OptionType::Unsigned, "geometric grid size", "25"},
                              hold_option("0.5")},
                             "json", true),
                 "json", cmd_lclt});
    t.push_back({"adaptive", "build a schedule by doubling until the plane hit probability reaches the target",
                 with_common({{"levels", OptionType::Unsigned, "number of intervals", std::nullopt, {}, true},
                              {"target", OptionType::Real, "hit probability target", "0.5"},
                              {"replicas", OptionType::Unsigned, "replica count", "1000"},
                              seed,
                              {"cap", OptionType::Unsigned, "largest allowed schedule value", "1099511627776"},
                              {"first", OptionType::Unsigned, "a_1", "2"},
                              hold_option("0.5")},
                             "json", false),
                 "json", cmd_adaptive});
    t.push_back({"prop61", "block-return sums of the alternating walk",
                 with_common({{"a-seq", OptionType::Text, "diagonal block lengths", std::nullopt, {}, true},
                              {"b-seq", OptionType::Text, "horizontal block lengths", std::nullopt, {}, true},
                              {"nmax", OptionType::Unsigned, "number of terms", std::nullopt, {}, true}},
                             "json", true),
                 "json", cmd_prop61});
    t.push_back({"lemma46", "partial sums of min(B_{n-1}^(-1/2), sqrt(b_n / B_n) / n) for a positive sequence",
                 with_common({{"b-seq", OptionType::Text, "positive integer sequence", std::nullopt, {}, true},
                              {"nmax", OptionType::Unsigned, "number of terms", std::nullopt, {}, true}},
                             "json", true),
                 "json", cmd_lemma46});
    return t;
}

}  // namespace

const std::vector<CommandSpec>& command_table() {
    static const std::vector<CommandSpec> table = build_table();
    return table;
}

const CommandSpec* find_command(const std::string& name) {
    for (const auto& c : command_table())
        if (c.name == name) return &c;
    return nullptr;
}

std::string execute(const CommandSpec& spec, const Params& params, bool timing) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = spec.run(params);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& f : result.side_files) write_file_atomically(f.path, f.content);
    if (params.text("format") == "csv") {
        if (!result.csv) config_fail("format", "csv output is not available for " + spec.name);
        return *result.csv;
    }
    json doc;
    doc["command"] = spec.name;
    doc["version"] = RWVD_VERSION;
    doc["config"] = params.echo();
    if (!result.warnings.empty()) doc["warnings"] = result.warnings;
    doc["payload"] = std::move(result.payload);
    if (timing) doc["wall_time_s"] = wall;
    return doc.dump(2) + "\n";
}

}  // namespace rwvd::cli

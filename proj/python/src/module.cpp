#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rwvd/cli.hpp"
#include "rwvd/criteria.hpp"
#include "rwvd/errors.hpp"
#include "rwvd/estimators.hpp"
#include "rwvd/lattice_walk.hpp"
#include "rwvd/schedules.hpp"

namespace py = pybind11;
using namespace rwvd;

namespace {

WalkKind walk_from(const std::string& name) {
    const auto k = parse_walk_kind(name);
    if (!k) throw InvalidArgument("unknown walk kind: " + name);
    return *k;
}

PhiKind phi_kind_from(const std::string& name) {
    if (name == "phi") return PhiKind::Phi;
    if (name == "phi1") return PhiKind::Phi1;
    throw InvalidArgument("kind must be phi or phi1");
}

py::dict fit_dict(const std::optional<TailFit>& f) {
    py::dict d;
    if (!f) return d;
    d["beta"] = f->beta;
    d["gamma"] = f->gamma ? py::cast(*f->gamma) : py::none();
    d["verdict"] = to_string(f->verdict);
    return d;
}

py::dict hitting_dict(const HittingEstimate& e) {
    py::dict d;
    d["p_hat"] = e.p_hat;
    d["stderr"] = e.stderr_p;
    d["replicas"] = e.replicas;
    d["exact"] = e.exact;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<ScheduleFamily>(m, "ScheduleFamily")
        .def_static("double_exp_sqrt", &ScheduleFamily::double_exp_sqrt)
        .def_static("double_exp_theta", &ScheduleFamily::double_exp_theta, py::arg("theta"))
        .def_static("single_exp", &ScheduleFamily::single_exp)
        .def_static("exp_poly_log", &ScheduleFamily::exp_poly_log, py::arg("alpha"))
        .def_static("geometric", &ScheduleFamily::geometric, py::arg("ratio"))
        .def_static("power_law", &ScheduleFamily::power_law, py::arg("power"))
        .def_static("explicit", &ScheduleFamily::explicit_values, py::arg("values"))
        .def("log_value", &ScheduleFamily::log_value)
        .def("materialize", [](const ScheduleFamily& f, std::uint64_t n) { return materialize(f, n); })
        .def("__repr__", &ScheduleFamily::describe);

    py::class_<LatticeDistribution>(m, "LatticeDistribution")
        .def_property_readonly("dimension", &LatticeDistribution::dimension)
        .def_property_readonly("marginals", [](const LatticeDistribution& d) {
            std::vector<std::vector<std::pair<std::int64_t, double>>> out;
            for (const auto& mg : d.marginals) out.push_back(mg.pmf);
            return out;
        });
    m.def("simple_walk", &simple_walk, py::arg("dimension"));
    m.def("lazy_walk", &lazy_walk, py::arg("dimension"), py::arg("hold") = 0.5);
    m.def("product_walk", [](const std::vector<std::vector<std::pair<std::int64_t, double>>>& pmfs) {
        LatticeDistribution d;
        for (const auto& p : pmfs) d.marginals.push_back({p});
        validate(d);
        return d;
    }, py::arg("marginals"));

    m.def("phi", [](const ScheduleFamily& f, std::uint64_t n, const std::string& kind) {
        return phi_value(f, phi_kind_from(kind), n);
    }, py::arg("family"), py::arg("n"), py::arg("kind") = "phi");
    m.def("criterion_partial_sums", [](const std::string& walk, const ScheduleFamily& f, std::uint64_t n) {
        return criterion_partial_sums(walk_from(walk), f, n);
    }, py::arg("walk"), py::arg("family"), py::arg("nmax"));
    m.def("classify", [](const std::string& walk, const ScheduleFamily& f, std::uint64_t n) {
        const auto rep = classify(walk_from(walk), f, n);
        py::dict d;
        d["verdict"] = to_string(rep.verdict);
        d["verdict_source"] = to_string(rep.verdict_source);
        d["fit_verdict"] = rep.fit_verdict ? py::cast(to_string(*rep.fit_verdict)) : py::none();
        d["series"] = to_string(rep.series);
        d["tail_fit"] = fit_dict(rep.tail_fit);
        d["monotone_ok"] = rep.monotone_ok;
        d["partial_sum"] = rep.partial_sums.back();
        return d;
    }, py::arg("walk"), py::arg("family"), py::arg("nmax"));

    m.def("exact_return_prob", &exact_return_prob, py::arg("dist"), py::arg("k"));
    m.def("exact_hitting", [](const LatticeDistribution& d, std::uint64_t a, std::uint64_t b) {
        return exact_hitting_dp(d, a, b);
    }, py::arg("dist"), py::arg("a"), py::arg("b"));
    m.def("mc_hitting", [](const LatticeDistribution& d, std::uint64_t a, std::uint64_t b, std::uint64_t r,
                           std::uint64_t seed) { return hitting_dict(mc_hitting(d, a, b, r, seed)); },
          py::arg("dist"), py::arg("a"), py::arg("b"), py::arg("replicas"), py::arg("seed") = 0);
    m.def("lclt_fit", [](const LatticeDistribution& d, std::uint64_t kmin, std::uint64_t kmax, int points) {
        const auto f = lclt_exponent_fit(d, kmin, kmax, points);
        py::dict out;
        out["slope"] = f.slope;
        out["intercept"] = f.intercept;
        out["period"] = f.period;
        out["ks"] = f.ks;
        out["probs"] = f.probs;
        return out;
    }, py::arg("dist"), py::arg("kmin"), py::arg("kmax"), py::arg("points") = 25);
    m.def("bound_bands", [](const LatticeDistribution& d, int dim) {
        const auto grid = default_band_grid(dim);
        const auto r = bound_band_scan(d, dim, grid);
        py::list cells;
        for (const auto& c : r.cells) cells.append(py::make_tuple(c.a, c.b, c.p_exact, c.reference, c.ratio));
        py::dict out;
        out["cells"] = cells;
        out["spread"] = r.spread();
        out["excluded"] = r.excluded;
        return out;
    }, py::arg("dist"), py::arg("dimension"));

    m.def("simulate", [](const std::string& walk, const ScheduleFamily& f, std::uint64_t horizon,
                         std::uint64_t replicas, std::uint64_t seed) {
        const auto kind = walk_from(walk);
        const auto s = simulate_replicas(default_law(kind), varying_profile(kind, f, horizon), seed, replicas);
        py::list intervals;
        for (const auto& iv : s.intervals)
            intervals.append(py::make_tuple(iv.start, iv.end, iv.mean_returns, iv.stderr_returns));
        py::dict out;
        out["mean_returns"] = s.mean_returns;
        out["replicas_with_return"] = s.replicas_with_return;
        out["intervals"] = intervals;
        return out;
    }, py::arg("walk"), py::arg("family"), py::arg("horizon"), py::arg("replicas"), py::arg("seed") = 0);

    m.def("prop61", [](const std::string& a, const std::string& b, std::uint64_t n) {
        const auto r = prop61_sums(cli::parse_sequence_spec(a), cli::parse_sequence_spec(b), n);
        py::dict out;
        out["verdict_dumb"] = to_string(r.verdict_dumb);
        out["verdict_t"] = to_string(r.verdict_t);
        out["fit_dumb"] = fit_dict(r.fit_dumb);
        out["terms_t"] = r.terms_t;
        out["transient"] = r.transient;
        return out;
    }, py::arg("a_seq"), py::arg("b_seq"), py::arg("nmax"));
    m.def("lemma46", [](const std::string& b, std::uint64_t n) {
        const auto r = lemma46_partial_sums(cli::parse_sequence_spec(b), n);
        py::dict out;
        out["partial_sums"] = r.partial_sums;
        out["doubling_increments"] = r.doubling_increments ? py::cast(*r.doubling_increments) : py::none();
        return out;
    }, py::arg("b_seq"), py::arg("nmax"));
    m.def("second_moment", [](const std::string& walk, const ScheduleFamily& f, std::uint64_t M,
                              std::uint64_t replicas, std::uint64_t seed) {
        const auto r = second_moment_ratio(walk_from(walk), f, M, replicas, seed);
        py::dict out;
        out["ratio"] = r.ratio;
        out["first_moment"] = r.first_moment;
        out["second_moment"] = r.second_moment;
        out["eligible"] = r.eligible;
        return out;
    }, py::arg("walk"), py::arg("family"), py::arg("M"), py::arg("replicas"), py::arg("seed") = 0);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ubmot/density.hpp"
#include "ubmot/errors.hpp"
#include "ubmot/moments.hpp"
#include "ubmot/refmodels.hpp"
#include "ubmot/sff.hpp"
#include "ubmot/simulate.hpp"
#include "ubmot/validate.hpp"

namespace py = pybind11;
using namespace ubmot;

namespace {

py::dict table_dict(const SweepTable& t) {
    py::dict cols;
    for (size_t c = 0; c < t.columns().size(); ++c) {
        py::list v;
        for (const auto& row : t.rows()) std::visit([&](const auto& x) { v.append(x); }, row[c]);
        cols[py::str(t.columns()[c])] = v;
    }
    return cols;
}

py::dict sff_dict(const SffValue& v) {
    py::dict d;
    d["k_or_mu"] = v.k_or_mu;
    d["t"] = v.t;
    d["regime"] = regime_name(v.regime);
    d["N"] = v.N;
    d["value"] = v.value;
    d["method"] = v.method;
    d["err_estimate"] = v.err_estimate;
    return d;
}

SffMethod sff_method(const std::string& s) {
    if (s == "auto") return SffMethod::AUTO;
    if (s == "double-sum") return SffMethod::DOUBLE_SUM;
    if (s == "integral") return SffMethod::INTEGRAL;
    throw DomainError("unknown sff method '" + s + "'");
}

DensityMethod density_method(const std::string& s) {
    if (s == "herglotz") return DensityMethod::HERGLOTZ;
    if (s == "fourier") return DensityMethod::FOURIER;
    throw DomainError("unknown density method '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_ubmot, m) {
    m.doc() = "Spectral statistics of unitary Brownian motion started at the identity";

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    auto stab = py::register_exception<StabilityError>(m, "StabilityError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", stab.ptr());
    (void)domain;

    m.def(
        "moment",
        [](int N, double t, int k, const std::string& form) {
            return moment_finite(EnsembleParams::make(N, t), k, parse_form(form)).value;
        },
        py::arg("N"), py::arg("t"), py::arg("k"), py::arg("form") = "a8b");
    m.def("moment_jacobi", &moment_jacobi, py::arg("N"), py::arg("k"), py::arg("t"));
    m.def(
        "moment_limit", [](int k, double t) { return moment_limit(k, t).value; }, py::arg("k"), py::arg("t"));
    m.def("t_star", &t_star, py::arg("mu"));
    m.def(
        "moment_asymptotic",
        [](double mu, double t, int N) {
            AsymptoticMoment a = moment_asymptotic(mu, t, N);
            py::dict d;
            d["regime"] = regime_name(a.regime);
            d["t_star"] = a.t_star;
            d["envelope"] = a.envelope;
            d["phase"] = a.phase;
            d["decay_rate"] = a.decay_rate;
            d["value"] = a.value ? py::cast(*a.value) : py::none();
            return d;
        },
        py::arg("mu"), py::arg("t"), py::arg("N"));

    m.def(
        "sff_exact",
        [](int N, double t, long k, const std::string& method) {
            return sff_dict(sff_exact(EnsembleParams::make(N, t), k, sff_method(method)));
        },
        py::arg("N"), py::arg("t"), py::arg("k"), py::arg("method") = "auto");
    m.def(
        "sff_integral_form", [](int N, double t, long k) { return sff_dict(sff_integral_form(EnsembleParams::make(N, t), k)); },
        py::arg("N"), py::arg("t"), py::arg("k"));
    m.def(
        "sff_fixed_k_limit", [](int k, double t) { return sff_dict(sff_fixed_k_limit(k, t)); }, py::arg("k"),
        py::arg("t"));
    m.def(
        "sff_scaled_limit", [](double mu, double t) { return sff_dict(sff_scaled_limit(mu, t)); }, py::arg("mu"),
        py::arg("t"));
    m.def(
        "sff_heuristic", [](double mu, double t) { return sff_dict(sff_heuristic(mu, t)); }, py::arg("mu"),
        py::arg("t"));
    m.def("sum_rule_integral", [](double T) { return sum_rule_integral(T); }, py::arg("T"));
    m.def(
        "drp_curve", [](int N, double t, const std::vector<double>& mu) { return table_dict(drp_curve(N, t, mu)); },
        py::arg("N"), py::arg("t"), py::arg("mu"));

    m.def(
        "density",
        [](double t, double x, const std::string& method) { return density_limit(t, x, density_method(method)); },
        py::arg("t"), py::arg("x"), py::arg("method") = "herglotz");
    m.def(
        "density_profile",
        [](double t, const std::vector<double>& xs, const std::string& method) {
            return density_profile(t, xs, density_method(method)).values;
        },
        py::arg("t"), py::arg("x"), py::arg("method") = "herglotz");
    m.def(
        "density_finite_N", [](int N, double t, double x) { return density_finite_N(EnsembleParams::make(N, t), x); },
        py::arg("N"), py::arg("t"), py::arg("x"));
    m.def("herglotz", py::overload_cast<double, double>(&herglotz_solve), py::arg("t"), py::arg("x"));
    m.def("support_edge", &support_edge, py::arg("t"));
    m.def("edge_amplitude", &edge_amplitude, py::arg("t"));
    m.def(
        "critical_mus",
        [](double t) {
            CriticalMus c = critical_mus(t);
            return py::make_tuple(c.mu_r ? py::cast(*c.mu_r) : py::none(), c.mu_p);
        },
        py::arg("t"));

    m.def(
        "simulate",
        [](int N, double sqrt_dt, long steps, std::uint64_t seed) {
            SimConfig c;
            c.N = N;
            c.sqrt_dt = sqrt_dt;
            c.n_steps = steps;
            c.seed = seed;
            Trajectory tr = evolve(c);
            return py::make_tuple(tr.times, tr.angles);
        },
        py::arg("N"), py::arg("sqrt_dt"), py::arg("steps"), py::arg("seed") = 0);
    m.def(
        "mc_observables",
        [](int N, double sqrt_dt, long trajectories, std::uint64_t seed, const std::vector<int>& k,
           const std::vector<double>& t, int threads) {
            SimConfig c;
            c.N = N;
            c.sqrt_dt = sqrt_dt;
            c.n_trajectories = trajectories;
            c.seed = seed;
            double tmax = 0.0;
            for (double x : t) tmax = std::max(tmax, x);
            c.n_steps = std::lround(tmax / (N * c.dt())) + 1;
            return table_dict(mc_observables(c, k, t, threads));
        },
        py::arg("N"), py::arg("sqrt_dt"), py::arg("trajectories"), py::arg("seed"), py::arg("k"), py::arg("t"),
        py::arg("threads") = 1);

    m.def("gue_sff_limit", &gue_sff_limit, py::arg("tau_b"));
    m.def("gue_char_avg", &gue_char_avg, py::arg("N"), py::arg("k"));
    m.def(
        "gue_drp_curve", [](int N, const std::vector<double>& tau) { return table_dict(gue_drp_curve(N, tau)); },
        py::arg("N"), py::arg("tau_b"));

    m.def(
        "validate",
        [](const std::string& suite, bool small) {
            ValidateOptions opt;
            opt.small_budget = small;
            std::vector<CriterionReport> reps;
            {
                py::gil_scoped_release release;
                for (int id : suite_criteria(suite)) reps.push_back(run_criterion(id, opt));
            }
            return report_json(reps);
        },
        py::arg("suite") = "all", py::arg("small") = true);
}

#include "ubmot/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ubmot/density.hpp"
#include "ubmot/errors.hpp"
#include "ubmot/moments.hpp"
#include "ubmot/refmodels.hpp"
#include "ubmot/sff.hpp"
#include "ubmot/simulate.hpp"
#include "ubmot/table.hpp"
#include "ubmot/validate.hpp"

namespace ubmot::cli {

namespace {

constexpr const char* kVersion = "ubmot 0.1.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string format = "csv";
    std::string out;
    int threads = 0;
    double tol = kNaN;
    bool no_meta = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--threads", c.threads, "worker threads (default UBMOT_THREADS or all cores)");
    sub->add_option("--tol", c.tol, "fail with exit 3 if any err_estimate exceeds this");
    sub->add_flag("--no-meta", c.no_meta, "omit the timestamp line for byte-stable output");
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string joined(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

void write_text(const std::string& text, const Common& c, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw DomainError("cannot open " + c.out + " for writing");
    f << text;
    if (!f) throw DomainError("write to " + c.out + " failed");
}

void emit(SweepTable& tab, const Common& c, const std::string& cmdline, std::ostream& out) {
    if (!std::isnan(c.tol)) {
        const auto& cols = tab.columns();
        if (std::find(cols.begin(), cols.end(), "err_estimate") != cols.end()) {
            const auto e = tab.column("err_estimate");
            for (size_t i = 0; i < e.size(); ++i)
                if (!(e[i] <= c.tol))
                    throw StabilityError("row " + std::to_string(i) + ": err_estimate " + format_double(e[i]) +
                                         " above --tol " + format_double(c.tol));
        }
    }
    tab.set_meta("tool", kVersion);
    tab.set_meta("command", cmdline);
    if (!c.no_meta) tab.set_meta("timestamp", utc_now());
    write_text(c.format == "json" ? tab.to_json() : tab.to_csv(), c, out);
}

// Row i of a sweep computed by f(i); rows land in index order whatever the
// thread count.
template <class F>
std::vector<std::vector<Cell>> sweep(long n, int threads, F f) {
    std::vector<std::vector<Cell>> rows(n);
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<long>(n, 1024))));
    std::vector<std::exception_ptr> errs(threads);
    auto work = [&](int w) {
        try {
            for (long i = w; i < n; i += threads) rows[i] = f(i);
        } catch (...) {
            errs[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<int> to_int(const std::vector<long>& v) {
    std::vector<int> r;
    for (long x : v) {
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
            throw DomainError("integer out of range: " + std::to_string(x));
        r.push_back(static_cast<int>(x));
    }
    return r;
}

SffMethod parse_sff_method(const std::string& s) {
    if (s == "auto") return SffMethod::AUTO;
    if (s == "double-sum") return SffMethod::DOUBLE_SUM;
    return SffMethod::INTEGRAL;
}

std::string lower(std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

std::string csv_safe(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n') ch = ';';
    return s;
}

}  // namespace

std::vector<long> parse_int_range(const std::string& s) {
    std::vector<long> out;
    auto num = [&](const std::string& x) {
        size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(x, &pos);
        } catch (const std::exception&) {
            throw UsageError("bad integer '" + x + "' in '" + s + "'");
        }
        if (pos != x.size()) throw UsageError("bad integer '" + x + "' in '" + s + "'");
        return v;
    };
    if (const auto dd = s.find(".."); dd != std::string::npos) {
        const long a = num(s.substr(0, dd)), b = num(s.substr(dd + 2));
        if (b < a) throw UsageError("empty range '" + s + "'");
        for (long k = a; k <= b; ++k) out.push_back(k);
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(num(item));
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

std::vector<double> parse_real_grid(const std::string& s) {
    auto num = [&](const std::string& x) {
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(x, &pos);
        } catch (const std::exception&) {
            throw UsageError("bad number '" + x + "' in '" + s + "'");
        }
        if (pos != x.size()) throw UsageError("bad number '" + x + "' in '" + s + "'");
        return v;
    };
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> p;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) p.push_back(item);
        if (p.size() != 3) throw UsageError("grid must be a:b:n, got '" + s + "'");
        const double a = num(p[0]), b = num(p[1]);
        const long n = parse_int_range(p[2]).at(0);
        if (n < 1) throw UsageError("grid needs n >= 1");
        if (n == 1) return {a};
        for (long i = 0; i < n; ++i) out.push_back(i == n - 1 ? b : a + (b - a) * double(i) / double(n - 1));
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(num(item));
    if (out.empty()) throw UsageError("empty grid");
    return out;
}

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("UBMOT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral statistics of unitary Brownian motion started at the identity", "ubmot"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common c;

    // moments
    auto* mom = app.add_subcommand("moments", "finite-N moments m_k(t)");
    int m_N = 0;
    std::string m_t, m_k, m_form = "a8b";
    mom->add_option("--N", m_N, "matrix size")->required();
    mom->add_option("--t", m_t, "time(s): value, list or a:b:n")->required();
    mom->add_option("--k", m_k, "wavenumbers: a..b or list")->required();
    mom->add_option("--form", m_form, "a8b, a8, a8a, a8-first, m1, schur, limit, intro-4.0c");
    add_common(mom, c);

    // sff
    auto* sff = app.add_subcommand("sff", "spectral form factor S_N(k;t)");
    int s_N = 0;
    std::string s_t, s_k, s_regime = "exact", s_method = "auto";
    sff->add_option("--N", s_N, "matrix size (ignored for --regime limit)");
    sff->add_option("--t", s_t, "time(s)")->required();
    sff->add_option("--k", s_k, "wavenumbers")->required();
    sff->add_option("--regime", s_regime, "exact, integral or limit")
        ->check(CLI::IsMember({"exact", "integral", "limit"}));
    sff->add_option("--method", s_method, "exact regime: auto, double-sum or integral")
        ->check(CLI::IsMember({"auto", "double-sum", "integral"}));
    add_common(sff, c);

    // sff-scaled
    auto* ssc = app.add_subcommand("sff-scaled", "scaled limit S(muN;t)/N on a mu grid");
    std::string sc_t, sc_mu, sc_method = "limit";
    ssc->add_option("--t", sc_t, "time(s)")->required();
    ssc->add_option("--mu", sc_mu, "mu grid")->required();
    ssc->add_option("--method", sc_method, "limit or heuristic")->check(CLI::IsMember({"limit", "heuristic"}));
    add_common(ssc, c);

    // density
    auto* den = app.add_subcommand("density", "limiting (or finite-N) eigen-angle density");
    double d_t = 0.0;
    int d_N = 0;
    std::string d_x = "-3.141592653589793:3.141592653589793:257", d_method = "herglotz";
    den->add_option("--t", d_t, "time")->required();
    den->add_option("--x", d_x, "angle grid");
    den->add_option("--method", d_method, "herglotz or fourier")->check(CLI::IsMember({"herglotz", "fourier"}));
    den->add_option("--N", d_N, "finite N through the correlation kernel instead of the limit");
    add_common(den, c);

    // edges
    auto* edg = app.add_subcommand("edges", "support edge, edge amplitude, critical mu, t*, dip wavenumber");
    std::string e_t;
    int e_N = 100;
    double e_mu = 0.5;
    edg->add_option("--t", e_t, "time(s)")->required();
    edg->add_option("--N", e_N, "N for the dip wavenumber");
    edg->add_option("--mu", e_mu, "mu for the t* column");
    add_common(edg, c);

    // simulate
    auto* sim = app.add_subcommand("simulate", "one Brownian trajectory of eigen-angles");
    SimConfig sc;
    sim->add_option("--N", sc.N, "matrix size")->required();
    sim->add_option("--sqrt-dt", sc.sqrt_dt, "sqrt of the step size");
    sim->add_option("--steps", sc.n_steps, "number of steps")->required();
    sim->add_option("--trajectories", sc.n_trajectories, "must be 1");
    sim->add_option("--seed", sc.seed, "RNG seed");
    sim->add_option("--reunitarize-every", sc.reunitarize_every, "steps between polar corrections");
    add_common(sim, c);

    // mc-check
    auto* mcc = app.add_subcommand("mc-check", "Monte Carlo estimates against exact values");
    SimConfig mc;
    mc.N = 30;
    mc.n_steps = 0;
    mc.n_trajectories = 4000;
    mc.seed = 20240607;
    std::string mc_cp = "1,2,3.6", mc_k = "1..2";
    mcc->add_option("--N", mc.N, "matrix size");
    mcc->add_option("--sqrt-dt", mc.sqrt_dt, "sqrt of the step size");
    mcc->add_option("--trajectories", mc.n_trajectories, "ensemble size (>= 100)");
    mcc->add_option("--seed", mc.seed, "RNG seed");
    mcc->add_option("--checkpoints", mc_cp, "times");
    mcc->add_option("--k", mc_k, "wavenumbers");
    add_common(mcc, c);

    // drp-curve
    auto* drp = app.add_subcommand("drp-curve", "dip-ramp-plateau curve");
    std::string dr_model = "dbm", dr_grid;
    int dr_N = 20;
    double dr_t = 2.0;
    drp->add_option("--model", dr_model, "dbm or gue")->check(CLI::IsMember({"dbm", "gue"}));
    drp->add_option("--N", dr_N, "matrix size");
    drp->add_option("--t", dr_t, "time (dbm)");
    drp->add_option("--mu,--tau", dr_grid, "mu grid (dbm) or tau_b grid (gue)");
    add_common(drp, c);

    // validate
    auto* val = app.add_subcommand("validate", "acceptance suite");
    std::string v_suite = "all", v_budget = "full";
    unsigned long long v_seed = 20240607;
    val->add_option("--suite", v_suite,
                    "closed-forms, cross-forms, limits, asymptotics, density, monte-carlo, refmodels, all");
    val->add_option("--budget", v_budget, "full or small")->check(CLI::IsMember({"full", "small"}));
    val->add_option("--seed", v_seed, "Monte Carlo seed");
    add_common(val, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    const std::string cmdline = joined(argc, argv);
    const int threads = resolve_threads(c.threads);

    try {
        if (*mom) {
            const MomentForm form = parse_form(m_form);
            const auto ts = parse_real_grid(m_t);
            const auto ks = to_int(parse_int_range(m_k));
            const long nk = long(ks.size());
            SweepTable tab({"N", "t", "k", "value", "method", "err_estimate"});
            auto rows = sweep(long(ts.size()) * nk, threads, [&](long i) -> std::vector<Cell> {
                const double t = ts[i / nk];
                const int k = ks[i % nk];
                MomentValue v = moment_finite(EnsembleParams::make(m_N, t), k, form);
                return {std::int64_t(m_N), t, std::int64_t(k), v.value, std::string(form_name(form)),
                        v.err_estimate * std::abs(v.value)};
            });
            for (auto& r : rows) tab.add_row(std::move(r));
            emit(tab, c, cmdline, out);
        } else if (*sff) {
            const auto ts = parse_real_grid(s_t);
            const auto ks = parse_int_range(s_k);
            const long nk = long(ks.size());
            if (s_regime != "limit" && s_N < 1) throw DomainError("sff: --N required for this regime");
            SweepTable tab({"N", "t", "k", "regime", "value", "method", "err_estimate"});
            auto rows = sweep(long(ts.size()) * nk, threads, [&](long i) -> std::vector<Cell> {
                const double t = ts[i / nk];
                const long k = ks[i % nk];
                SffValue v;
                if (s_regime == "limit") {
                    v = sff_fixed_k_limit(static_cast<int>(k), t);
                } else {
                    const auto p = EnsembleParams::make(s_N, t);
                    v = s_regime == "integral" ? sff_integral_form(p, k) : sff_exact(p, k, parse_sff_method(s_method));
                }
                return {std::int64_t(s_regime == "limit" ? 0 : s_N), t, std::int64_t(k), std::string(regime_name(v.regime)),
                        v.value, v.method, v.err_estimate};
            });
            for (auto& r : rows) tab.add_row(std::move(r));
            emit(tab, c, cmdline, out);
        } else if (*ssc) {
            const auto ts = parse_real_grid(sc_t);
            const auto mus = parse_real_grid(sc_mu);
            const long nm = long(mus.size());
            SweepTable tab({"t", "mu", "t_star", "value", "method", "err_estimate"});
            auto rows = sweep(long(ts.size()) * nm, threads, [&](long i) -> std::vector<Cell> {
                const double t = ts[i / nm], mu = mus[i % nm];
                SffValue v = sc_method == "heuristic" ? sff_heuristic(mu, t) : sff_scaled_limit(mu, t);
                return {t, mu, t_star(mu), v.value, v.method, v.err_estimate};
            });
            for (auto& r : rows) tab.add_row(std::move(r));
            emit(tab, c, cmdline, out);
        } else if (*den) {
            const auto xs = parse_real_grid(d_x);
            SweepTable tab({"t", "x", "rho", "method", "err_estimate"});
            if (d_N > 0) {
                if (d_method != "herglotz") throw DomainError("density: --method applies to the N -> inf limit only");
                const auto p = EnsembleParams::make(d_N, d_t);
                const CorrelationKernel K(p);
                for (double x : xs)
                    tab.add_row({d_t, x, K.density(x), std::string("kernel"), 1e-15 * d_N});
                tab.set_meta("N", std::to_string(d_N));
            } else {
                const auto m = lower(d_method) == "fourier" ? DensityMethod::FOURIER : DensityMethod::HERGLOTZ;
                DensityProfile prof = density_profile(d_t, xs, m);
                const double e = m == DensityMethod::FOURIER ? 1e-16 * fourier_terms(d_t) : 1e-12;
                for (size_t i = 0; i < xs.size(); ++i) tab.add_row({d_t, xs[i], prof.values[i], d_method, e});
                tab.set_meta("support_edge", format_double(prof.support_edge));
                if (prof.edge_amplitude) tab.set_meta("edge_amplitude", format_double(*prof.edge_amplitude));
            }
            emit(tab, c, cmdline, out);
        } else if (*edg) {
            const auto ts = parse_real_grid(e_t);
            SweepTable tab({"t", "support_edge", "edge_amplitude", "mu_r", "mu_p", "mu", "t_star",
                            "dip_wavenumber", "dip_exponent", "dip_law"});
            const double ts_mu = t_star(e_mu);
            for (double t : ts) {
                const bool sub = t > 0.0 && t < 4.0;
                const CriticalMus cm = critical_mus(t);
                const DipWavenumber dw = dip_wavenumber(t, e_N);
                tab.add_row({t, sub ? support_edge(t) : std::numbers::pi, sub ? edge_amplitude(t) : kNaN,
                             cm.mu_r.value_or(kNaN), cm.mu_p, e_mu, ts_mu, dw.value, dw.exponent, dw.law});
            }
            tab.set_meta("N", std::to_string(e_N));
            emit(tab, c, cmdline, out);
        } else if (*sim) {
            if (sc.n_trajectories != 1)
                throw DomainError("simulate writes a single trajectory; use mc-check for ensembles");
            Trajectory tr = evolve(sc, 0);
            SweepTable tab = trajectory_table(tr);
            tab.set_meta("seed", std::to_string(sc.seed));
            tab.set_meta("max_displacement", format_double(tr.max_displacement));
            emit(tab, c, cmdline, out);
        } else if (*mcc) {
            const auto cps = parse_real_grid(mc_cp);
            const auto ks = to_int(parse_int_range(mc_k));
            double tmax = 0.0;
            for (double t : cps) tmax = std::max(tmax, t);
            mc.n_steps = std::lround(tmax / (mc.N * mc.dt())) + 1;
            SweepTable obs = mc_observables(mc, ks, cps, threads);
            SweepTable tab({"observable", "k", "t", "estimate", "stderr", "exact", "z", "within_3sigma"});
            bool all_ok = true;
            for (size_t i = 0; i < obs.rows().size(); ++i) {
                const int k = static_cast<int>(obs.number(i, "k"));
                const double t = obs.number(i, "t");
                const auto p = EnsembleParams::make(mc.N, t);
                const double m_ex = moment_finite(p, k).value;
                const double s_ex = sff_exact(p, k).value;
                const double zm = (obs.number(i, "m_re") - m_ex) / obs.number(i, "m_stderr");
                const double zs = (obs.number(i, "sff") - s_ex) / obs.number(i, "sff_stderr");
                all_ok = all_ok && std::abs(zm) <= 3.0 && std::abs(zs) <= 3.0;
                tab.add_row({std::string("m"), std::int64_t(k), t, obs.number(i, "m_re"), obs.number(i, "m_stderr"),
                             m_ex, zm, std::int64_t(std::abs(zm) <= 3.0)});
                tab.add_row({std::string("sff"), std::int64_t(k), t, obs.number(i, "sff"),
                             obs.number(i, "sff_stderr"), s_ex, zs, std::int64_t(std::abs(zs) <= 3.0)});
            }
            tab.set_meta("seed", std::to_string(mc.seed));
            tab.set_meta("trajectories", std::to_string(mc.n_trajectories));
            tab.set_meta("all_within_3sigma", all_ok ? "true" : "false");
            emit(tab, c, cmdline, out);
        } else if (*drp) {
            const auto grid = parse_real_grid(dr_grid.empty() ? "0.01:2:200" : dr_grid);
            if (dr_model == "gue") {
                SweepTable tab = gue_drp_curve(dr_N, grid);
                try {
                    tab.set_meta("dip_tau_b", format_double(envelope_dip(tab.column("tau_b"), tab.column("value"))));
                } catch (const DomainError&) {
                    // grid too coarse to see the envelope; the curve is still useful
                }
                emit(tab, c, cmdline, out);
            } else {
                SweepTable tab = drp_curve(dr_N, dr_t, grid);
                const DipFeatures d = dip_features(tab);
                tab.set_meta("dip_mu", format_double(d.mu_dip));
                tab.set_meta("post_dip_height", format_double(d.post_dip_height));
                emit(tab, c, cmdline, out);
            }
        } else if (*val) {
            ValidateOptions opt;
            opt.small_budget = v_budget == "small";
            opt.threads = threads;
            opt.seed = v_seed;
            std::vector<CriterionReport> reps;
            for (int id : suite_criteria(v_suite)) {
                reps.push_back(run_criterion(id, opt));
                err << reps.back().summary() << '\n';
            }
            bool ok = true;
            for (const auto& r : reps) ok = ok && r.pass();
            if (c.format == "json") {
                write_text(report_json(reps), c, out);
            } else {
                SweepTable tab({"criterion", "check", "pass", "measured", "tolerance", "detail"});
                for (const auto& r : reps)
                    for (const auto& k : r.checks)
                        tab.add_row({std::int64_t(r.id), csv_safe(k.name), std::int64_t(k.pass), k.measured,
                                     k.tolerance, csv_safe(k.detail)});
                tab.set_meta("suite", v_suite);
                tab.set_meta("budget", v_budget);
                tab.set_meta("pass", ok ? "true" : "false");
                emit(tab, c, cmdline, out);
            }
            return ok ? 0 : 4;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const StabilityError& e) {
        err << "stability error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace ubmot::cli

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

void summary(const std::string& line, const std::vector<std::string>& files) {
    std::printf("%s", line.c_str());
    if (!files.empty()) std::printf(" -> %s", files.front().c_str());
    if (files.size() > 1) std::printf(" (+%zu files)", files.size() - 1);
    std::printf("\n");
}

bool all_zero_modes(const ts_coeff* c) {
    const std::size_t m = ts_coeff_modes(c);
    std::vector<double> a(m), b(m);
    check(ts_coeff_terms(c, nullptr, a.data(), b.data(), m));
    return std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; }) &&
           std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });
}

double constant_of(const ts_coeff* c) {
    double c0 = 0.0;
    check(ts_coeff_terms(c, &c0, nullptr, nullptr, 0));
    return c0;
}

Json pair_json(const Pair& p) {
    Json j = Json::object();
    j["p"] = coeff_to_json(p.p.get());
    j["q"] = coeff_to_json(p.q.get());
    return j;
}

SpectrumHandle spectrum(const ts_pair& pair, ts_boundary kind, int n_max, int dimension, int grid, bool eig) {
    ts_spectrum_options o = ts_spectrum_options_default();
    o.dimension = dimension;
    o.grid_intervals = grid;
    o.eigenfunctions = eig ? 1 : 0;
    ts_spectrum* s = nullptr;
    check(ts_spectrum_compute(pair, kind, n_max, &o, &s));
    return SpectrumHandle(s);
}

std::vector<double> values_of(const ts_spectrum* s) {
    std::vector<double> v(static_cast<std::size_t>(ts_spectrum_count(s)));
    check(ts_spectrum_values(s, v.data(), v.size()));
    return v;
}

Json exceptional_json(const ts_exceptional& e) {
    Json j = Json::object();
    j["boundary"] = boundary_name(e.kind);
    j["k"] = e.k;
    j["t"] = e.t;
    j["modes"] = {e.first, e.second};
    j["a1"] = e.a1;
    j["a1_over_pi2"] = e.a1 / kPi2;
    return j;
}

Json clusters_json(const ts_degeneracy* d, ts_boundary kind) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < ts_degeneracy_cluster_count(d, kind); ++i) {
        std::vector<int> idx(ts_degeneracy_cluster_size(d, kind, i));
        check(ts_degeneracy_cluster(d, kind, i, idx.data(), idx.size()));
        arr.push_back(idx);
    }
    return arr;
}

Json degeneracy_json(const ts_degeneracy* d) {
    Json j = Json::object();
    j["in_W"] = ts_degeneracy_in_w(d) != 0;
    j["dirichlet_clusters"] = clusters_json(d, TS_DIRICHLET);
    j["dirichlet_neumann_clusters"] = clusters_json(d, TS_DIRICHLET_NEUMANN);
    ts_exceptional e{};
    int found = 0;
    check(ts_degeneracy_exceptional(d, &e, &found));
    j["exceptional_constant"] = found ? exceptional_json(e) : Json(nullptr);
    return j;
}

ts_estimate_options estimate_options(const Json& c) {
    ts_estimate_options o = ts_estimate_options_default();
    o.alpha = get_double(c, "alpha", o.alpha);
    o.ball_radius = get_double(c, "ball_radius", o.ball_radius);
    o.degeneracy_tol = get_double(c, "degeneracy_tol", o.degeneracy_tol);
    o.points_per_mode = get_int(c, "points_per_mode", o.points_per_mode);
    o.first = get_int(c, "first", o.first);
    o.last = get_int(c, "last", o.last);
    return o;
}

std::vector<Pair> pairs_from(const Json& c, const Json& fallback) {
    const Json& arr = c.contains("pairs") ? c.at("pairs") : fallback;
    if (!arr.is_array()) throw CliError(kValidation, "config field 'pairs' must be an array");
    std::vector<Pair> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(pair_from_json(arr[i], "pairs[" + std::to_string(i) + "]"));
    return out;
}

Json estimate_json(const ts_estimate_set* s, std::size_t i, std::string& csv) {
    ts_estimate_summary sm{};
    check(ts_estimate_set_summary(s, i, &sm));
    std::vector<int> n(sm.points);
    std::vector<double> lhs(sm.points), ratio(sm.points);
    check(ts_estimate_set_series(s, i, n.data(), lhs.data(), ratio.data(), sm.points));
    Json j = Json::object();
    j["estimate"] = ts_estimate_name(sm.id);
    j["alpha"] = sm.alpha;
    j["norm_factor"] = sm.norm_factor;
    j["max_ratio"] = sm.max_ratio;
    j["trend_slope"] = sm.trend_slope;
    j["max_trend_slope"] = ts_max_trend_slope();
    j["passed"] = sm.passed != 0;
    j["n"] = n;
    j["lhs"] = lhs;
    j["ratio"] = ratio;
    csv = csv_row({"n", "lhs", "ratio"});
    for (std::size_t k = 0; k < sm.points; ++k) csv += csv_row({std::to_string(n[k]), num(lhs[k]), num(ratio[k])});
    return j;
}

std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell.erase(0, cell.find_first_not_of(" \t\r"));
        cell.erase(cell.find_last_not_of(" \t\r") + 1);
        out.push_back(cell);
    }
    return out;
}

// Rows "n,lambda,mu"; an optional non-numeric header row is skipped.
void read_targets_csv(const std::string& path, std::vector<double>& lambda, std::vector<double>& mu) {
    std::ifstream in(path);
    if (!in) throw CliError(kValidation, "cannot read targets CSV '" + path + "'");
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto f = csv_fields(line);
        try {
            if (f.size() != 3) throw std::invalid_argument("columns");
            std::size_t used = 0;
            const int n = std::stoi(f[0], &used);
            if (used != f[0].size() || n != static_cast<int>(lambda.size()) + 1) throw std::invalid_argument("index");
            lambda.push_back(std::stod(f[1]));
            mu.push_back(std::stod(f[2]));
        } catch (const std::exception&) {
            if (first && lambda.empty()) {
                first = false;
                continue;
            }
            throw CliError(kValidation, "targets CSV '" + path + "': malformed row '" + line + "' (expected n,lambda,mu)");
        }
        first = false;
    }
    if (lambda.empty()) throw CliError(kValidation, "targets CSV '" + path + "' has no rows");
}

}  // namespace

// ---- spectrum ----

int run_spectrum(const Context& ctx) {
    const Json& c = ctx.config;
    allow_keys(c, {"p", "q", "boundary", "n_max", "dimension", "grid_intervals", "eigenfunctions", "degeneracy_tol",
                   "seed"},
               "spectrum config");
    Pair pair = pair_from_json(Json{{"p", c.value("p", Json(0.0))}, {"q", c.value("q", Json(0.0))}}, "spectrum");
    const std::string which = get_string(c, "boundary", "both");
    const int n_max = get_int(c, "n_max", 10);
    const int dimension = get_int(c, "dimension", 0);
    const int grid = get_int(c, "grid_intervals", 0);
    const bool eigenfunctions = get_bool(c, "eigenfunctions", false);
    const double tol = get_double(c, "degeneracy_tol", 1e-6);

    std::vector<ts_boundary> kinds;
    if (which == "both") {
        kinds = {TS_DIRICHLET, TS_DIRICHLET_NEUMANN};
    } else {
        kinds = {boundary_from(which)};
    }

    Json report = Json::object();
    report["command"] = "spectrum";
    report["n_max"] = n_max;
    report["pair"] = pair_json(pair);
    report["spectra"] = Json::array();
    std::string csv = csv_row({"kind", "n", "eigenvalue", "residual"});
    Outputs out;
    std::vector<SpectrumHandle> computed;
    for (ts_boundary kind : kinds) {
        SpectrumHandle s = spectrum(pair.view(), kind, n_max, dimension, grid, true);
        const auto values = values_of(s.get());
        std::vector<double> residuals(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            check(ts_spectrum_residual(s.get(), static_cast<int>(i) + 1, &residuals[i]));
        Json sj = Json::object();
        sj["boundary"] = boundary_name(kind);
        sj["dimension"] = ts_spectrum_dimension(s.get());
        sj["values"] = values;
        sj["residuals"] = residuals;
        report["spectra"].push_back(sj);
        for (std::size_t i = 0; i < values.size(); ++i)
            csv += csv_row({boundary_name(kind), std::to_string(i + 1), num(values[i]), num(residuals[i])});

        if (eigenfunctions) {
            const int m = ts_spectrum_grid_intervals(s.get());
            std::vector<double> y(static_cast<std::size_t>(m) + 1), dy(y.size());
            std::string ef = csv_row({"n", "x", "value", "derivative"});
            for (std::size_t i = 0; i < values.size(); ++i) {
                check(ts_spectrum_eigenfunction(s.get(), static_cast<int>(i) + 1, y.data(), dy.data(), y.size()));
                for (int k = 0; k <= m; ++k)
                    ef += csv_row({std::to_string(i + 1), num(static_cast<double>(k) / m),
                                   num(y[static_cast<std::size_t>(k)]), num(dy[static_cast<std::size_t>(k)])});
            }
            out.add(std::string("eigenfunctions_") + boundary_name(kind) + ".csv", ef);
        }
        computed.push_back(std::move(s));
    }
    if (computed.size() == 2) {
        std::optional<std::array<double, 2>> constant;
        if (all_zero_modes(pair.p.get()) && all_zero_modes(pair.q.get()))
            constant = std::array<double, 2>{constant_of(pair.p.get()), constant_of(pair.q.get())};
        ts_degeneracy* d = nullptr;
        check(ts_degeneracy_detect(computed[0].get(), computed[1].get(), tol, constant ? constant->data() : nullptr, &d));
        DegeneracyHandle dh(d);
        report["degeneracy"] = degeneracy_json(dh.get());
    }
    out.add("spectrum.json", dump(report));
    out.add("spectrum.csv", csv);
    const auto files = out.commit(ctx.out_dir, ctx.force);

    const auto& first = report["spectra"][0]["values"];
    summary("spectrum: " + std::to_string(n_max) + " eigenvalues per boundary, lowest " +
                num(first[0].get<double>()),
            files);
    return kOk;
}

// ---- inverse ----

int run_inverse(const Context& ctx, const std::string& config_dir) {
    const Json& c = ctx.config;
    allow_keys(c, {"known_slot", "known", "targets", "anchor", "solver", "truth", "synthetic", "seed"},
               "inverse config");
    const ts_slot known_slot = slot_from(get_string(c, "known_slot", "p"));
    const ts_slot unknown = known_slot == TS_SLOT_P ? TS_SLOT_Q : TS_SLOT_P;

    double anchor[2] = {0.0, 0.0};
    if (c.contains("anchor")) {
        const auto a = get_doubles(c, "anchor");
        if (a.size() != 2) throw CliError(kValidation, "config field 'anchor' must be [a1, a2]");
        anchor[0] = a[0];
        anchor[1] = a[1];
    }

    ts_solver_config sc = ts_solver_config_default();
    if (c.contains("solver")) {
        const Json& s = c.at("solver");
        if (!s.is_object()) throw CliError(kValidation, "config field 'solver' must be an object");
        allow_keys(s, {"basis_modes", "tikhonov", "damping", "max_iter", "tol", "forward_N", "oracle_N", "max_halvings"},
                   "solver");
        sc.basis_modes = get_int(s, "basis_modes", sc.basis_modes);
        sc.tikhonov = get_double(s, "tikhonov", sc.tikhonov);
        sc.damping = get_double(s, "damping", sc.damping);
        sc.max_iter = get_int(s, "max_iter", sc.max_iter);
        sc.tol = get_double(s, "tol", sc.tol);
        sc.forward_n = get_int(s, "forward_N", sc.forward_n);
        sc.oracle_n = get_int(s, "oracle_N", sc.oracle_n);
        sc.max_halvings = get_int(s, "max_halvings", sc.max_halvings);
    }

    ProblemHandle problem;
    Coeff truth;
    Json source = Json::object();
    if (c.contains("synthetic")) {
        if (c.contains("targets") || c.contains("known"))
            throw CliError(kValidation, "'synthetic' excludes 'targets' and 'known'");
        const Json& s = c.at("synthetic");
        if (!s.is_object()) throw CliError(kValidation, "config field 'synthetic' must be an object");
        allow_keys(s, {"epsilon", "n_spec", "modes", "oracle_N"}, "synthetic");
        const double eps = get_double(s, "epsilon", 0.05);
        const int n_spec = get_int(s, "n_spec", 16);
        const int modes = get_int(s, "modes", sc.basis_modes);
        int oracle_n = get_int(s, "oracle_N", sc.oracle_n);
        if (oracle_n == 0) {
            const int forward = sc.forward_n > 0 ? sc.forward_n : ts_truncation_dimension(n_spec, std::max(modes, sc.basis_modes));
            oracle_n = 2 * forward;
        }
        const std::uint64_t seed = ctx.seed_or(0);
        ts_inverse_problem* p = nullptr;
        ts_coeff* t = nullptr;
        check(ts_inverse_problem_synthetic(anchor, eps, seed, n_spec, unknown, oracle_n, modes, &p, &t));
        problem.reset(p);
        truth.reset(t);
        source["synthetic"] = {{"epsilon", eps}, {"n_spec", n_spec}, {"modes", modes}, {"oracle_N", oracle_n}, {"seed", seed}};
    } else {
        if (!c.contains("targets")) throw CliError(kValidation, "inverse config needs 'targets' or 'synthetic'");
        const Json& t = c.at("targets");
        if (!t.is_object()) throw CliError(kValidation, "config field 'targets' must be an object");
        allow_keys(t, {"lambda", "mu", "csv"}, "targets");
        std::vector<double> lambda, mu;
        if (t.contains("csv")) {
            if (t.contains("lambda") || t.contains("mu"))
                throw CliError(kValidation, "targets: give either 'csv' or 'lambda'/'mu'");
            std::filesystem::path path(get_string(t, "csv", ""));
            if (path.is_relative()) path = std::filesystem::path(config_dir) / path;
            read_targets_csv(path.string(), lambda, mu);
        } else {
            lambda = get_doubles(t, "lambda");
            mu = get_doubles(t, "mu");
        }
        if (lambda.empty() || lambda.size() != mu.size())
            throw CliError(kValidation, "targets: 'lambda' and 'mu' must be nonempty and of equal length");
        Coeff known = c.contains("known") ? coeff_from_json(c.at("known"), "known")
                                          : constant_coeff(known_slot == TS_SLOT_P ? anchor[0] : anchor[1]);
        ts_inverse_problem* p = nullptr;
        check(ts_inverse_problem_create(unknown, known.get(), lambda.data(), mu.data(), lambda.size(), anchor, &p));
        problem.reset(p);
        if (c.contains("truth")) truth = coeff_from_json(c.at("truth"), "truth");
        source["targets"] = t.contains("csv") ? "csv" : "inline";
    }

    ts_reconstruction* r = nullptr;
    check(ts_recover_unknown(problem.get(), &sc, truth.get(), &r));
    ReconstructionHandle rec(r);
    ts_reconstruction_summary sm{};
    check(ts_reconstruction_summary_get(rec.get(), &sm));
    std::vector<double> history(sm.history);
    check(ts_reconstruction_history(rec.get(), history.data(), history.size()));
    ts_coeff* e = nullptr;
    check(ts_reconstruction_estimate(rec.get(), &e));
    Coeff estimate(e);

    const std::size_t n_spec = ts_inverse_problem_size(problem.get());
    std::vector<double> lambda(n_spec), mu(n_spec);
    check(ts_inverse_problem_targets(problem.get(), lambda.data(), mu.data(), n_spec));

    Json report = Json::object();
    report["command"] = "inverse";
    report["known_slot"] = slot_name(known_slot);
    report["unknown_slot"] = slot_name(unknown);
    report["anchor"] = {anchor[0], anchor[1]};
    report["n_spec"] = n_spec;
    report["source"] = source;
    report["solver"] = {{"basis_modes", sc.basis_modes}, {"tikhonov", sc.tikhonov}, {"damping", sc.damping},
                        {"max_iter", sc.max_iter},       {"tol", sc.tol},           {"forward_N", sc.forward_n},
                        {"oracle_N", sc.oracle_n},       {"max_halvings", sc.max_halvings}};
    report["converged"] = sm.converged != 0;
    report["iterations"] = sm.iterations;
    report["threshold"] = sm.threshold;
    report["final_residual"] = sm.final_residual;
    report["residual_history"] = history;
    report["estimate"] = coeff_to_json(estimate.get());
    report["truth"] = truth ? coeff_to_json(truth.get()) : Json(nullptr);
    report["final_l2_error_vs_truth"] = sm.has_truth_error ? Json(sm.final_l2_error_vs_truth) : Json(nullptr);
    report["targets"] = {{"lambda", lambda}, {"mu", mu}};

    std::string csv = csv_row(truth ? std::vector<std::string>{"x", "estimate", "truth"}
                                    : std::vector<std::string>{"x", "estimate"});
    constexpr int kPoints = 200;
    for (int i = 0; i <= kPoints; ++i) {
        const double x = static_cast<double>(i) / kPoints;
        double v = 0.0;
        check(ts_coeff_eval(estimate.get(), x, &v));
        std::vector<std::string> row{num(x), num(v)};
        if (truth) {
            double tv = 0.0;
            check(ts_coeff_eval(truth.get(), x, &tv));
            row.push_back(num(tv));
        }
        csv += csv_row(row);
    }

    Outputs out;
    out.add("inverse.json", dump(report));
    out.add("inverse_coefficient.csv", csv);
    const auto files = out.commit(ctx.out_dir, ctx.force);
    std::string line = std::string("inverse: ") + (sm.converged ? "converged" : "NOT converged") + " after " +
                       std::to_string(sm.iterations) + " steps, residual " + num(sm.final_residual);
    if (sm.has_truth_error) line += ", L2 error vs truth " + num(sm.final_l2_error_vs_truth);
    summary(line, files);
    return sm.converged ? kOk : kNonConvergence;
}

// ---- riesz-check ----

int run_riesz(const Context& ctx) {
    const Json& c = ctx.config;
    allow_keys(c, {"p1", "p2", "draw", "n_max", "grid_intervals", "family", "seed"}, "riesz-check config");
    const int n_max = get_int(c, "n_max", 48);
    const int grid = get_int(c, "grid_intervals", 0);
    const std::string family = get_string(c, "family", "both");

    Pair p1, p2;
    Json drawn = nullptr;
    if (c.contains("draw")) {
        if (c.contains("p1") || c.contains("p2")) throw CliError(kValidation, "'draw' excludes 'p1' and 'p2'");
        const Json& d = c.at("draw");
        if (!d.is_object()) throw CliError(kValidation, "config field 'draw' must be an object");
        allow_keys(d, {"center", "radius", "modes"}, "draw");
        double center[2] = {0.0, 0.0};
        if (d.contains("center")) {
            const auto v = get_doubles(d, "center");
            if (v.size() != 2) throw CliError(kValidation, "draw.center must be [a1, a2]");
            center[0] = v[0];
            center[1] = v[1];
        }
        const double radius = get_double(d, "radius", 0.01);
        const int modes = get_int(d, "modes", 3);
        const std::uint64_t seed = ctx.seed_or(0);
        ts_coeff *p = nullptr, *q = nullptr;
        check(ts_random_pair(center, radius, modes, seed, &p, &q));
        p1.p.reset(p);
        p1.q.reset(q);
        check(ts_random_pair(center, radius, modes, seed + 1, &p, &q));
        p2.p.reset(p);
        p2.q.reset(q);
        drawn = {{"center", {center[0], center[1]}}, {"radius", radius}, {"modes", modes}, {"seed", seed}};
    } else {
        p1 = c.contains("p1") ? pair_from_json(c.at("p1"), "p1") : pair_from_json(Json::object(), "p1");
        p2 = c.contains("p2") ? pair_from_json(c.at("p2"), "p2") : pair_from_json(Json::object(), "p2");
    }

    std::vector<ts_family> families;
    if (family == "both") {
        families = {TS_FAMILY_VALUE, TS_FAMILY_DERIVATIVE};
    } else if (family == "value") {
        families = {TS_FAMILY_VALUE};
    } else if (family == "derivative") {
        families = {TS_FAMILY_DERIVATIVE};
    } else {
        throw CliError(kValidation, "family must be value, derivative or both");
    }

    Json report = Json::object();
    report["command"] = "riesz-check";
    report["n_max"] = n_max;
    report["draw"] = drawn;
    report["p1"] = pair_json(p1);
    report["p2"] = pair_json(p2);
    report["reports"] = Json::array();
    std::vector<std::vector<double>> terms;
    bool all_pass = true;
    for (ts_family f : families) {
        ts_riesz_report* r = nullptr;
        check(ts_riesz_check(p1.view(), p2.view(), f, n_max, grid, &r));
        RieszHandle rh(r);
        ts_riesz_summary s{};
        check(ts_riesz_report_summary(rh.get(), &s));
        std::vector<double> t(s.terms);
        check(ts_riesz_report_terms(rh.get(), t.data(), t.size()));
        Json j = Json::object();
        j["family"] = f == TS_FAMILY_VALUE ? "value" : "derivative";
        j["grid_intervals"] = s.grid_intervals;
        j["perturbation_sum"] = s.perturbation_sum;
        j["tail_estimate"] = s.tail_estimate;
        j["total"] = s.perturbation_sum + s.tail_estimate;
        j["criterion_bound"] = s.reference_lower * s.reference_lower / s.reference_upper;
        j["passes_criterion"] = s.passes_le3 != 0;
        j["frame_lower"] = s.frame_lower;
        j["frame_upper"] = s.frame_upper;
        j["frame_ratio"] = s.frame_upper / s.frame_lower;
        j["reference_lower"] = s.reference_lower;
        j["reference_upper"] = s.reference_upper;
        report["reports"].push_back(j);
        terms.push_back(std::move(t));
        all_pass = all_pass && s.passes_le3;
    }
    std::vector<std::string> header{"m"};
    for (ts_family f : families) header.push_back(f == TS_FAMILY_VALUE ? "value_distance2" : "derivative_distance2");
    std::string csv = csv_row(header);
    for (std::size_t m = 0; m < terms.front().size(); ++m) {
        std::vector<std::string> row{std::to_string(m)};
        for (const auto& t : terms) row.push_back(num(t[m]));
        csv += csv_row(row);
    }
    Outputs out;
    out.add("riesz.json", dump(report));
    out.add("riesz_terms.csv", csv);
    const auto files = out.commit(ctx.out_dir, ctx.force);
    summary(std::string("riesz-check: criterion ") + (all_pass ? "holds" : "FAILS") + " for " +
                std::to_string(families.size()) + " famil" + (families.size() == 1 ? "y" : "ies") + ", sum " +
                num(report["reports"][0]["perturbation_sum"].get<double>()),
            files);
    return kOk;
}

// ---- verify ----

namespace {

const char* kDefaultProducts =
    R"([{"p": {"cos": [0.05]}}, {"p": {"cos": [0.05]}}, {}, {}])";
const char* kDefaultDifferences = R"([{"p": {"cos": [0.05]}}, {}])";
const char* kDefaultSup = R"([{"p": {"cos": [0.05]}, "q": {"cos": [0, 0.03]}}])";
const char* kDefaultLoc = R"([{"p": 1}, {"q": 1}, {"p": {"cos": [1.0]}, "q": {"sin": [0.5]}}])";
const char* kDefaultForm = R"([{"p": {"cos": [0.05]}}, {}])";

}  // namespace

int run_verify(const Context& ctx, const std::string& estimate) {
    const Json& c = ctx.config;
    allow_keys(c,
               {"pairs", "alpha", "first", "last", "ball_radius", "points_per_mode", "degeneracy_tol", "r", "n",
                "boundary", "seed"},
               "verify config");
    Outputs out;
    Json report;
    std::string line;
    const std::string base = "verify_" + estimate;

    if (estimate == "a1" || estimate == "a2" || estimate == "b1" || estimate == "b2") {
        auto pairs = pairs_from(c, Json::parse(kDefaultProducts));
        if (pairs.size() != 4) throw CliError(kValidation, "product estimates need exactly 4 pairs");
        const ts_pair views[4] = {pairs[0].view(), pairs[1].view(), pairs[2].view(), pairs[3].view()};
        const ts_estimate_options o = estimate_options(c);
        ts_estimate_set* s = nullptr;
        check(ts_verify_products(views, &o, &s));
        EstimateHandle set(s);
        const std::size_t idx = estimate == "a1" ? 0 : estimate == "a2" ? 1 : estimate == "b1" ? 2 : 3;
        std::string csv;
        report = Json::array({estimate_json(set.get(), idx, csv)});
        out.add(base + ".csv", csv);
    } else if (estimate == "eq1" || estimate == "eq2") {
        auto pairs = pairs_from(c, Json::parse(kDefaultDifferences));
        if (pairs.size() != 2) throw CliError(kValidation, "difference estimates need exactly 2 pairs");
        const ts_estimate_options o = estimate_options(c);
        ts_estimate_set* s = nullptr;
        check(ts_verify_differences(pairs[0].view(), pairs[1].view(), &o, &s));
        EstimateHandle set(s);
        std::string csv;
        report = Json::array({estimate_json(set.get(), estimate == "eq1" ? 0 : 1, csv)});
        out.add(base + ".csv", csv);
    } else if (estimate == "sup") {
        auto pairs = pairs_from(c, Json::parse(kDefaultSup));
        if (pairs.size() != 1) throw CliError(kValidation, "sup bounds take exactly 1 pair");
        const ts_estimate_options o = estimate_options(c);
        ts_sup_report* s = nullptr;
        check(ts_verify_sup_bounds(pairs[0].view(), &o, &s));
        SupHandle sh(s);
        const std::size_t m = ts_sup_report_count(sh.get());
        std::vector<int> n(m);
        std::vector<double> v(m), d(m);
        check(ts_sup_report_series(sh.get(), n.data(), v.data(), d.data(), m));
        double mv = 0, md = 0;
        check(ts_sup_report_maxima(sh.get(), &mv, &md));
        report = Json::object();
        report["estimate"] = "sup";
        report["pair"] = pair_json(pairs[0]);
        report["n"] = n;
        report["sup_value"] = v;
        report["sup_derivative"] = d;
        report["max_value"] = mv;
        report["max_derivative"] = md;
        std::string csv = csv_row({"n", "sup_value", "sup_derivative"});
        for (std::size_t i = 0; i < m; ++i) csv += csv_row({std::to_string(n[i]), num(v[i]), num(d[i])});
        out.add(base + ".csv", csv);
    } else if (estimate == "loc") {
        auto pairs = pairs_from(c, Json::parse(kDefaultLoc));
        if (pairs.empty()) throw CliError(kValidation, "localization needs at least 1 pair");
        const double alpha = get_double(c, "alpha", 2.9);
        const double r = get_double(c, "r", 4.0);
        const int first = get_int(c, "first", 1);
        const int last = get_int(c, "last", 48);
        int big_n = 0;
        check(ts_disjointness_index(r, alpha, &big_n));
        report = Json::object();
        report["estimate"] = "loc";
        report["alpha"] = alpha;
        report["r"] = r;
        report["disjointness_index"] = big_n;
        report["pairs"] = Json::array();
        double minimal_r = 0.0;
        std::string csv = csv_row({"pair", "n", "eigenvalue", "distance", "radius", "in_own_disk", "in_region"});
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            ts_loc_report* lr = nullptr;
            check(ts_verify_localization(pairs[k].view(), alpha, r, first, last, &lr));
            LocHandle lh(lr);
            ts_loc_summary sm{};
            check(ts_loc_report_summary(lh.get(), &sm));
            std::vector<int> n(sm.points), own(sm.points), reg(sm.points);
            std::vector<double> ev(sm.points), dist(sm.points), rad(sm.points);
            check(ts_loc_report_series(lh.get(), n.data(), ev.data(), dist.data(), rad.data(), own.data(), reg.data(),
                                       sm.points));
            Json pj = Json::object();
            pj["pair"] = pair_json(pairs[k]);
            pj["minimal_r"] = sm.minimal_r;
            pj["first_contained"] = sm.first_contained;
            pj["all_in_region"] = sm.all_in_region != 0;
            pj["n"] = n;
            pj["eigenvalue"] = ev;
            pj["distance"] = dist;
            pj["radius"] = rad;
            report["pairs"].push_back(pj);
            minimal_r = std::max(minimal_r, sm.minimal_r);
            for (std::size_t i = 0; i < sm.points; ++i)
                csv += csv_row({std::to_string(k), std::to_string(n[i]), num(ev[i]), num(dist[i]), num(rad[i]),
                                std::to_string(own[i]), std::to_string(reg[i])});
        }
        report["minimal_r"] = minimal_r;
        out.add(base + ".csv", csv);
        line = "verify loc: minimal r " + num(minimal_r) + ", N(r, alpha) = " + std::to_string(big_n);
    } else if (estimate == "form") {
        auto pairs = pairs_from(c, Json::parse(kDefaultForm));
        if (pairs.size() != 2) throw CliError(kValidation, "the form identity needs exactly 2 pairs");
        const int n = get_int(c, "n", 3);
        const std::string which = get_string(c, "boundary", "both");
        std::vector<ts_boundary> kinds =
            which == "both" ? std::vector<ts_boundary>{TS_DIRICHLET, TS_DIRICHLET_NEUMANN}
                            : std::vector<ts_boundary>{boundary_from(which)};
        report = Json::array();
        std::string csv = csv_row({"boundary", "n", "eigenvalue", "lhs", "rhs", "residual", "subtraction_lhs",
                                   "subtraction_rhs", "subtraction_residual"});
        double worst = 0.0;
        for (ts_boundary k : kinds) {
            ts_form_identity f{};
            check(ts_verify_form_identity(pairs[0].view(), pairs[1].view(), k, n, &f));
            report.push_back({{"estimate", "form"},
                              {"boundary", boundary_name(k)},
                              {"n", n},
                              {"eigenvalue", f.eigenvalue},
                              {"lhs", f.lhs},
                              {"rhs", f.rhs},
                              {"residual", f.residual},
                              {"subtraction_lhs", f.subtraction_lhs},
                              {"subtraction_rhs", f.subtraction_rhs},
                              {"subtraction_residual", f.subtraction_residual}});
            csv += csv_row({boundary_name(k), std::to_string(n), num(f.eigenvalue), num(f.lhs), num(f.rhs),
                            num(f.residual), num(f.subtraction_lhs), num(f.subtraction_rhs),
                            num(f.subtraction_residual)});
            worst = std::max(worst, f.residual / (1.0 + std::abs(f.eigenvalue)));
        }
        out.add(base + ".csv", csv);
        line = "verify form: max relative residual " + num(worst);
    } else {
        throw CliError(kUsage, "unknown estimate '" + estimate + "'");
    }

    if (line.empty()) {
        if (report.is_array()) {
            const Json& r = report[0];
            line = "verify " + estimate + ": max ratio " + num(r["max_ratio"].get<double>()) + ", trend slope " +
                   num(r["trend_slope"].get<double>()) + (r["passed"].get<bool>() ? " (bounded)" : " (GROWING)");
        } else {
            line = "verify sup: max |psi_n| " + num(report["max_value"].get<double>()) + ", max |psi_n'|/k_n " +
                   num(report["max_derivative"].get<double>());
        }
    }
    out.add(base + ".json", dump(report));
    const auto files = out.commit(ctx.out_dir, ctx.force);
    summary(line, files);
    return kOk;
}

// ---- degenerate-scan ----

int run_scan(const Context& ctx, const ScanArgs& args) {
    if (args.steps < 1) throw CliError(kValidation, "--steps must be >= 1");
    if (args.n_max < 2) throw CliError(kValidation, "--n-max must be >= 2");
    const double unit = args.pi2_units ? kPi2 : 1.0;
    const double lo = args.lo * unit;
    const double hi = args.hi * unit;
    if (!(lo <= hi)) throw CliError(kValidation, "--a1-range needs lo <= hi");

    struct Point {
        double a1;
        const char* source;
    };
    std::vector<Point> points;
    for (int i = 0; i <= args.steps; ++i) {
        const double t = args.lo + (args.hi - args.lo) * i / args.steps;
        points.push_back({t * unit, "grid"});
    }
    std::size_t count = 0;
    check(ts_exceptional_lines(lo, hi, args.n_max, nullptr, 0, &count));
    std::vector<ts_exceptional> lines(count);
    check(ts_exceptional_lines(lo, hi, args.n_max, lines.data(), lines.size(), &count));
    for (const auto& l : lines) {
        const bool present = std::any_of(points.begin(), points.end(), [&](const Point& p) {
            return std::abs(p.a1 - l.a1) <= 1e-12 * std::abs(l.a1);
        });
        if (!present) points.push_back({l.a1, "exceptional-line"});
    }
    std::stable_sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.a1 < b.a1; });

    Json report = Json::object();
    report["command"] = "degenerate-scan";
    report["a1_range"] = {lo, hi};
    report["steps"] = args.steps;
    report["a2"] = args.a2;
    report["n_max"] = args.n_max;
    report["tolerance"] = args.tol;
    report["exceptional_lines"] = Json::array();
    for (const auto& l : lines) report["exceptional_lines"].push_back(exceptional_json(l));
    report["points"] = Json::array();
    report["flagged"] = Json::array();
    std::string csv = csv_row({"a1", "a1_over_pi2", "source", "in_W", "dirichlet_clusters", "dirichlet_neumann_clusters"});
    std::vector<std::string> flagged_text;
    for (const auto& pt : points) {
        Pair pair{constant_coeff(pt.a1), constant_coeff(args.a2)};
        SpectrumHandle d = spectrum(pair.view(), TS_DIRICHLET, args.n_max, 0, 0, false);
        SpectrumHandle dn = spectrum(pair.view(), TS_DIRICHLET_NEUMANN, args.n_max, 0, 0, false);
        const double constant[2] = {pt.a1, args.a2};
        ts_degeneracy* g = nullptr;
        check(ts_degeneracy_detect(d.get(), dn.get(), args.tol, constant, &g));
        DegeneracyHandle dg(g);
        Json j = degeneracy_json(dg.get());
        j["a1"] = pt.a1;
        j["a1_over_pi2"] = pt.a1 / kPi2;
        j["source"] = pt.source;
        const bool in_w = j["in_W"].get<bool>();
        if (!in_w) {
            for (ts_boundary kind : {TS_DIRICHLET, TS_DIRICHLET_NEUMANN})
                for (const auto& cl : clusters_json(dg.get(), kind)) {
                    report["flagged"].push_back(
                        {{"a1", pt.a1}, {"a1_over_pi2", pt.a1 / kPi2}, {"boundary", boundary_name(kind)}, {"modes", cl}});
                    flagged_text.push_back(num(pt.a1 / kPi2) + " pi^2 (" + boundary_name(kind) + ")");
                }
        }
        csv += csv_row({num(pt.a1), num(pt.a1 / kPi2), pt.source, in_w ? "1" : "0",
                        std::to_string(ts_degeneracy_cluster_count(dg.get(), TS_DIRICHLET)),
                        std::to_string(ts_degeneracy_cluster_count(dg.get(), TS_DIRICHLET_NEUMANN))});
        Json ordered = Json::object();
        for (const char* key : {"a1", "a1_over_pi2", "source", "in_W", "dirichlet_clusters", "dirichlet_neumann_clusters",
                                "exceptional_constant"})
            ordered[key] = j[key];
        report["points"].push_back(ordered);
    }
    Outputs out;
    out.add("scan.json", dump(report));
    out.add("scan.csv", csv);
    const auto files = out.commit(ctx.out_dir, ctx.force);
    std::string line = "degenerate-scan: " + std::to_string(points.size()) + " points, ";
    if (flagged_text.empty()) {
        line += "no multiple eigenvalues";
    } else {
        line += "flagged a1 =";
        for (std::size_t i = 0; i < flagged_text.size(); ++i) line += (i ? ", " : " ") + flagged_text[i];
    }
    summary(line, files);
    return kOk;
}

// ---- probe ----

int run_probe(const Context& ctx, int trials_flag) {
    const Json& c = ctx.config;
    allow_keys(c, {"anchor", "epsilon", "known_slot", "n_spec", "modes", "trials", "seed"}, "probe config");
    double anchor[2] = {0.0, 0.0};
    if (c.contains("anchor")) {
        const auto a = get_doubles(c, "anchor");
        if (a.size() != 2) throw CliError(kValidation, "config field 'anchor' must be [a1, a2]");
        anchor[0] = a[0];
        anchor[1] = a[1];
    }
    const double eps = get_double(c, "epsilon", 0.05);
    const ts_slot known = slot_from(get_string(c, "known_slot", "p"));
    const ts_slot unknown = known == TS_SLOT_P ? TS_SLOT_Q : TS_SLOT_P;
    const int n_spec = get_int(c, "n_spec", 16);
    const int modes = get_int(c, "modes", 6);
    const int trials = trials_flag > 0 ? trials_flag : get_int(c, "trials", 20);
    const std::uint64_t seed = ctx.seed_or(0);

    ts_probe_report* r = nullptr;
    check(ts_uniqueness_probe(anchor, eps, trials, seed, unknown, n_spec, modes, &r));
    ProbeHandle ph(r);
    ts_probe_summary sm{};
    check(ts_probe_report_summary(ph.get(), &sm));
    std::vector<double> sd(sm.trials), cd(sm.trials), ratio(sm.trials);
    check(ts_probe_report_trials(ph.get(), sd.data(), cd.data(), ratio.data(), sm.trials));

    Json report = Json::object();
    report["command"] = "probe";
    report["anchor"] = {anchor[0], anchor[1]};
    report["epsilon"] = eps;
    report["known_slot"] = slot_name(known);
    report["unknown_slot"] = slot_name(unknown);
    report["n_spec"] = n_spec;
    report["modes"] = modes;
    report["seed"] = seed;
    report["min_ratio"] = sm.min_ratio;
    report["max_ratio"] = sm.max_ratio;
    report["consistent"] = sm.consistent != 0;
    report["spectral_distance"] = sd;
    report["coefficient_distance"] = cd;
    report["ratio"] = ratio;
    std::string csv = csv_row({"trial", "spectral_distance", "coefficient_distance", "ratio"});
    for (std::size_t i = 0; i < sm.trials; ++i)
        csv += csv_row({std::to_string(i), num(sd[i]), num(cd[i]), num(ratio[i])});
    Outputs out;
    out.add("probe.json", dump(report));
    out.add("probe.csv", csv);
    const auto files = out.commit(ctx.out_dir, ctx.force);
    summary("probe: " + std::to_string(trials) + " trials, min spectral/coefficient ratio " + num(sm.min_ratio), files);
    return kOk;
}

}  // namespace cli

// Acceptance criteria. `acceptance k` runs criterion k, no argument runs all.
// Each criterion prints one PASS/FAIL line; the exit status is nonzero on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "twospec/estimates.hpp"
#include "twospec/inverse.hpp"
#include "twospec/parallel.hpp"
#include "twospec/riesz.hpp"
#include "twospec/spectra.hpp"

using namespace twospec;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// mu_n for a constant pair, written out independently of the library.
double closed_form(double a1, double a2, BoundaryKind kind, int n) {
    const double k = (kind == BoundaryKind::Dirichlet ? n : n + 0.5) * pi;
    return std::pow(k, 4) + a1 * k * k + a2;
}

Outcome criterion1() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    SpectrumOptions o;
    o.dimension = 64;
    o.eigenfunctions = false;
    for (auto [a1, a2] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}, std::pair{-5 * pi * pi, 0.0}})
        for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::DirichletNeumann}) {
            const auto s = compute_spectrum(CoefficientPair::constants(a1, a2), kind, 20, o).spectrum;
            for (int n = 1; n <= 20; ++n) {
                const double exact = closed_form(a1, a2, kind, n);
                worst = std::max(worst, std::abs(s.value(n) - exact) / std::abs(exact));
            }
        }
    const double t = seconds_since(t0);
    return {worst <= 1e-8 && t < 5.0, fmt("max relative error %.3e over 3 pairs x 2 kinds x n<=20, %.2f s", worst, t)};
}

Outcome criterion2() {
    SpectrumOptions o;
    o.eigenfunctions = false;
    const auto d_pair = CoefficientPair::constants(-5 * pi * pi, 0);
    const auto d = compute_spectrum(d_pair, BoundaryKind::Dirichlet, 8, o).spectrum;
    const auto d_dn = compute_spectrum(d_pair, BoundaryKind::DirichletNeumann, 8, o).spectrum;
    const double gap_d = std::abs(d.value(1) - d.value(2)) / std::abs(d.value(2));
    const auto rep_d = detect_degeneracy(d, d_dn, kDefaultDegeneracyTol, std::array{-5 * pi * pi, 0.0});

    const auto n_pair = CoefficientPair::constants(-8.5 * pi * pi, 0);
    const auto nd = compute_spectrum(n_pair, BoundaryKind::Dirichlet, 8, o).spectrum;
    const auto nn = compute_spectrum(n_pair, BoundaryKind::DirichletNeumann, 8, o).spectrum;
    const double gap_n = std::abs(nn.value(1) - nn.value(2)) / std::abs(nn.value(2));
    const auto rep_n = detect_degeneracy(nd, nn, kDefaultDegeneracyTol, std::array{-8.5 * pi * pi, 0.0});

    auto has_12 = [](const std::vector<std::vector<int>>& clusters) {
        for (const auto& c : clusters)
            if (c.size() == 2 && c[0] == 1 && c[1] == 2) return true;
        return false;
    };
    const bool ok = gap_d <= 1e-6 && gap_n <= 1e-6 && has_12(rep_d.dirichlet_clusters) &&
                    has_12(rep_n.dirichlet_neumann_clusters) && !rep_d.in_W && !rep_n.in_W &&
                    rep_d.exceptional_constant.has_value() && rep_n.exceptional_constant.has_value();
    return {ok, fmt("lambda1/lambda2 gap %.2e at -5pi^2, mu1/mu2 gap %.2e at -8.5pi^2, in_W %d/%d", gap_d, gap_n,
                    int(rep_d.in_W), int(rep_n.in_W))};
}

Outcome criterion3() {
    const CoefficientPair anchors[] = {
        CoefficientPair::constants(0, 0),
        {CoefficientFunction::series(0.0, {0.05}, {}), CoefficientFunction::series(0.0, {0.0, 0.03}, {})}};
    const auto dir = CoefficientFunction::series(1.0, {0.5}, {0.0, 0.3});
    const double h = 1e-3;
    SpectrumOptions o;
    o.dimension = 64;
    double worst = 0.0;
    for (const auto& base : anchors)
        for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::DirichletNeumann})
            for (int slot = 0; slot < 2; ++slot) {
                const CoefficientPair delta = slot == 0 ? CoefficientPair{dir, {}} : CoefficientPair{{}, dir};
                auto shifted = [&](double s) {
                    CoefficientPair c = base;
                    (slot == 0 ? c.p : c.q) += s * dir;
                    return compute_spectrum(c, kind, 10, {.dimension = 64, .eigenfunctions = false}).spectrum;
                };
                const auto eig = compute_spectrum(base, kind, 10, o).pairs;
                const auto plus = shifted(h), minus = shifted(-h);
                for (int n = 1; n <= 10; ++n) {
                    const double fd = (plus.value(n) - minus.value(n)) / (2 * h);
                    const double an = frechet_eigenvalue_derivative(eig[static_cast<std::size_t>(n - 1)], delta);
                    worst = std::max(worst, std::abs(an - fd) / std::max(1.0, std::abs(fd)));
                }
            }
    const auto zero = compute_spectrum(CoefficientPair::constants(0, 0), BoundaryKind::Dirichlet, 10, o).pairs;
    double unit = 0.0;
    for (int n = 1; n <= 10; ++n) {
        const double d = frechet_eigenvalue_derivative(zero[static_cast<std::size_t>(n - 1)],
                                                       {CoefficientFunction::constant(1.0), {}});
        unit = std::max(unit, std::abs(d - n * n * pi * pi) / (n * n * pi * pi));
    }
    return {worst <= 1e-5 && unit <= 1e-10,
            fmt("max relative Frechet/FD mismatch %.2e (h = %g), dp = 1 error %.2e", worst, h, unit)};
}

Outcome criterion4() {
    double worst_bound = 0.0, worst_ratio = 0.0, min_lower = 1e300;
    int draws = 0;
    bool ok = true;
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto p1 = random_pair({0.0, 0.0}, 0.01, 3, seed);
        const auto p2 = random_pair({0.0, 0.0}, 0.01, 3, seed + 100);
        const auto set1 = eigenfunction_set(p1, 48, default_family_grid(48));
        const auto set2 = eigenfunction_set(p2, 48, default_family_grid(48));
        for (auto kind : {FamilyKind::Value, FamilyKind::Derivative}) {
            const auto r = riesz_check(set1, set2, kind, 48);
            const double bound = r.perturbation_sum + r.tail_estimate;
            const double ratio = r.frame_upper / r.frame_lower;
            ok = ok && bound < 1.0 && r.frame_lower > 0.0 && r.frame_lower <= r.frame_upper && ratio <= 4.0;
            worst_bound = std::max(worst_bound, bound);
            worst_ratio = std::max(worst_ratio, ratio);
            min_lower = std::min(min_lower, r.frame_lower);
            ++draws;
        }
    }
    const auto z = CoefficientPair::constants(0, 0);
    double zero_sum = 0.0;
    for (auto kind : {FamilyKind::Value, FamilyKind::Derivative})
        zero_sum = std::max(zero_sum, riesz_check(z, z, kind, 48).perturbation_sum);
    ok = ok && zero_sum <= 1e-10;
    return {ok, fmt("%d family checks: max sum+tail %.3e, min a %.4f, max A/a %.4f; zero pair sum %.1e", draws,
                    worst_bound, min_lower, worst_ratio, zero_sum)};
}

Outcome criterion5() {
    const auto t0 = Clock::now();
    const CoefficientPair a{CoefficientFunction::series(0.0, {0.05}, {0.02}), CoefficientFunction::series(0.0, {0.03}, {})};
    const CoefficientPair b{CoefficientFunction::series(0.0, {0.0, 0.04}, {}), CoefficientFunction::series(0.0, {}, {0.05})};
    const auto z = CoefficientPair::constants(0, 0);
    std::vector<EstimateReport> reports;
    for (const auto& r : verify_product_estimates({a, b, z, b}, {8, 48})) reports.push_back(r);
    for (const auto& r : verify_difference_estimates(a, b, {8, 48})) reports.push_back(r);
    bool ok = reports.size() == 6;
    double worst_slope = -1e300, worst_ratio = 0.0;
    for (const auto& r : reports) {
        ok = ok && r.passed && std::isfinite(r.max_ratio) && r.trend_slope <= 0.05;
        worst_slope = std::max(worst_slope, r.trend_slope);
        worst_ratio = std::max(worst_ratio, r.max_ratio);
    }
    const double t = seconds_since(t0);
    ok = ok && t < 120.0;
    return {ok, fmt("6 estimates over n = 8..48: max ratio %.3e, max trend slope %.3f, %.1f s", worst_ratio, worst_slope, t)};
}

// Index one past the last n <= limit whose disk overlaps the next one.
int enumerate_disjointness(double r, double alpha, long long limit) {
    long long last_bad = 0;
    for (long long n = 1; n <= limit; ++n) {
        const double lo_next = closed_form(0, 0, BoundaryKind::DirichletNeumann, static_cast<int>(n + 1)) - r * std::pow(n + 1.0, alpha);
        const double hi_here = closed_form(0, 0, BoundaryKind::DirichletNeumann, static_cast<int>(n)) + r * std::pow(n, alpha);
        if (!(lo_next > hi_here)) last_bad = n;
    }
    return static_cast<int>(last_bad + 1);
}

Outcome criterion6() {
    const CoefficientPair pairs[] = {
        CoefficientPair::constants(1, 0),
        CoefficientPair::constants(0, 1),
        {CoefficientFunction::series(0.0, {0.6}, {0.3}), CoefficientFunction::series(0.2, {}, {0.5})},
        {CoefficientFunction::series(-0.3, {0.0, 0.5}, {}), CoefficientFunction::series(0.0, {0.4}, {0.4})},
    };
    bool ok = true;
    double overall = 0.0;
    for (const auto& pr : pairs) {
        ok = ok && pr.norm() <= 1.0 + 1e-12;
        const auto rep = verify_localization(pr, 2.9, 4.0, {1, 32});
        ok = ok && std::isfinite(rep.minimal_r) && rep.minimal_r > 0.0;
        overall = std::max(overall, rep.minimal_r);
        const auto wide = verify_localization(pr, 2.9, rep.minimal_r * 1.0001, {1, 32});
        ok = ok && wide.all_in_region;
    }
    int mismatches = 0, cases = 0;
    for (double r : {0.5, 4.0, 10.0, 100.0, overall})
        for (double alpha : {2.1, 2.5, 2.9}) {
            ++cases;
            if (disjointness_index(r, alpha) != enumerate_disjointness(r, alpha, 200000)) ++mismatches;
        }
    ok = ok && mismatches == 0;
    return {ok, fmt("minimal r over 4 pairs with norm <= 1 is %.4f; disjointness index matched enumeration in %d/%d cases",
                    overall, cases - mismatches, cases)};
}

Outcome criterion7() {
    const auto t0 = Clock::now();
    SolverConfig c;
    c.basis_modes = 6;
    std::string detail;
    bool ok = true;
    for (auto slot : {Slot::Q, Slot::P}) {
        const int forward = truncation_dimension(16, c.basis_modes);
        int good = 0;
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto s = generate_synthetic_problem({0.0, 0.0}, 0.05, seed, 16, slot, 2 * forward, 6);
            const auto r = recover_unknown(s.problem, c, &s.truth);
            const double err = r.final_l2_error_vs_truth.value_or(1e300);
            worst = std::max(worst, err);
            if (r.converged && err <= 1e-3) ++good;
        }
        ok = ok && good >= 9;
        detail += fmt("%s slot %d/10 (max error %.2e); ", to_string(slot), good, worst);
    }
    // constants reached in one step from the anchor
    double const_err = 0.0;
    int const_iters = 0;
    for (auto slot : {Slot::Q, Slot::P}) {
        const auto truth = slot == Slot::Q ? CoefficientPair::constants(0, 0.3) : CoefficientPair::constants(0.3, 0);
        InverseProblem p;
        p.unknown = slot;
        p.known = CoefficientFunction::constant(0.0);
        p.target_lambda = unperturbed_spectrum(truth.p.constant_part(), truth.q.constant_part(), BoundaryKind::Dirichlet, 16).values;
        p.target_mu = unperturbed_spectrum(truth.p.constant_part(), truth.q.constant_part(), BoundaryKind::DirichletNeumann, 16).values;
        const auto r = recover_unknown(p, c);
        const_err = std::max(const_err, (r.estimate - CoefficientFunction::constant(0.3)).l2_norm());
        const_iters = std::max(const_iters, r.iterations);
        ok = ok && r.converged;
    }
    ok = ok && const_err <= 1e-10 && const_iters <= 1;
    const double t = seconds_since(t0);
    ok = ok && t < 600.0;
    return {ok, detail + fmt("constants: error %.1e in %d step(s); %.1f s", const_err, const_iters, t)};
}

std::string serialize(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += fmt("%.17g,", x);
    return s;
}

// Digest of one run of each seeded computation, written at full precision.
std::string seeded_digest() {
    std::string out;
    const auto syn = generate_synthetic_problem({0.0, 0.0}, 0.05, 42, 16, Slot::Q);
    const auto r = recover_unknown(syn.problem, {}, &syn.truth);
    out += serialize(r.residual_history);
    out += serialize(std::vector<double>(r.parameters.data(), r.parameters.data() + r.parameters.size()));
    const auto rr = riesz_check(random_pair({0, 0}, 0.01, 3, 42), random_pair({0, 0}, 0.01, 3, 43), FamilyKind::Derivative, 32);
    out += serialize(rr.terms) + fmt("%.17g,%.17g", rr.frame_lower, rr.frame_upper);
    const auto probe = uniqueness_probe({0.0, 0.0}, 0.05, 6, 42);
    for (const auto& t : probe.trials) out += fmt("%.17g,%.17g,", t.spectral_distance, t.coefficient_distance);
    for (const auto& e : verify_difference_estimates(random_pair({0, 0}, 0.5, 3, 42), CoefficientPair::constants(0, 0), {8, 24}))
        out += serialize(e.ratios);
    return out;
}

int run_cli(const std::filesystem::path& dir, const std::string& args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" TWOSPEC_CLI "' " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion8() {
    set_thread_count(1);
    const auto one = seeded_digest();
    set_thread_count(4);
    const auto four = seeded_digest();
    set_thread_count(0);
    const auto again = seeded_digest();
    bool ok = one == four && one == again;

    namespace fs = std::filesystem;
    const fs::path dir = fs::path(TWOSPEC_SCRATCH) / "acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "inv.json") << R"({"known_slot": "p", "synthetic": {"epsilon": 0.05, "n_spec": 16}})";
    std::ofstream(dir / "r.json") << R"({"draw": {"radius": 0.01}, "n_max": 32})";
    const std::pair<const char*, const char*> runs[] = {
        {"spectrum", "spectrum.json"},
        {"inverse --config inv.json --seed 7", "inverse.json"},
        {"riesz-check --config r.json --seed 7", "riesz.json"},
        {"verify --estimate a1", "verify_a1.json"},
        {"degenerate-scan --a1-range -9 0 --steps 18 --pi2", "scan.json"},
        {"probe --trials 5 --seed 7", "probe.json"},
    };
    int identical = 0;
    for (const auto& [args, file] : runs) {
        const bool ran = run_cli(dir, std::string(args) + " --threads 1 --out a") == 0 &&
                         run_cli(dir, std::string(args) + " --threads 4 --out b") == 0;
        if (ran && !slurp(dir / "a" / file).empty() && slurp(dir / "a" / file) == slurp(dir / "b" / file)) ++identical;
    }
    ok = ok && identical == static_cast<int>(std::size(runs));
    return {ok, fmt("library digest (%zu bytes) identical at 1/4/default threads: %s; CLI reports byte-identical %d/%zu",
                    one.size(), one == four && one == again ? "yes" : "no", identical, std::size(runs))};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8};
    std::vector<int> which;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
            return 2;
        }
        which.push_back(k);
    } else {
        for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) which.push_back(k);
    }
    bool all = true;
    for (int k : which) {
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(k - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}

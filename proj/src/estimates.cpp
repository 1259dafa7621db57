#include "twospec/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twospec/errors.hpp"
#include "twospec/parallel.hpp"

namespace twospec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
    if (!(alpha > 2.0 && alpha < 3.0)) throw DomainError("alpha must lie in (2,3)");
}

void check_range(IndexRange range) {
    if (range.first < 1 || range.last < range.first) throw DomainError("invalid index range");
}

// All modes 1..n_last of both kinds, on one grid with >= points_per_mode * n points per mode n.
struct ModeSet {
    std::vector<EigenPair> dirichlet;
    std::vector<EigenPair> dirichlet_neumann;
};

ModeSet modes_for(const CoefficientPair& pair, int n_last, const EstimateOptions& opt) {
    if (!(pair.norm() < opt.ball_radius)) throw DomainError("coefficient pair outside the declared ball B(0, M)");
    SpectrumOptions so;
    const int grid = opt.points_per_mode * n_last;
    so.grid_intervals = std::max(1024, grid + grid % 2);
    ModeSet s;
    auto d = compute_spectrum(pair, BoundaryKind::Dirichlet, n_last + 1, so);
    auto dn = compute_spectrum(pair, BoundaryKind::DirichletNeumann, n_last + 1, so);
    if (!find_clusters(d.spectrum, opt.degeneracy_tol).empty() ||
        !find_clusters(dn.spectrum, opt.degeneracy_tol).empty())
        throw DegeneracyError("multiple eigenvalues within the tested index range");
    d.pairs.pop_back();
    dn.pairs.pop_back();
    s.dirichlet = std::move(d.pairs);
    s.dirichlet_neumann = std::move(dn.pairs);
    return s;
}

const std::vector<double>& pick(const EigenPair& e, bool derivative) {
    return derivative ? e.derivative_samples : e.samples;
}

double scale_for(const EigenPair& e, bool derivative) {
    return derivative ? 1.0 / wavenumber(e.kind, e.n) : 1.0;
}

void finish(EstimateReport& r) {
    r.max_ratio = 0.0;
    bool finite = true;
    for (double v : r.ratios) {
        finite = finite && std::isfinite(v);
        r.max_ratio = std::max(r.max_ratio, v);
    }
    r.trend_slope = trend_slope(r.n_values, r.ratios);
    r.passed = finite && r.trend_slope <= kMaxTrendSlope;
}

double ratio(double lhs, double norm, int n, double alpha) {
    if (norm == 0.0) {
        if (lhs > 1e-12) throw NumericError("nonzero left side with a vanishing norm factor");
        return 0.0;
    }
    return lhs * std::pow(n, alpha - 2.0) / norm;
}

}  // namespace

const char* to_string(EstimateId id) noexcept {
    switch (id) {
        case EstimateId::A1: return "a1";
        case EstimateId::A2: return "a2";
        case EstimateId::B1: return "b1";
        case EstimateId::B2: return "b2";
        case EstimateId::Eq1: return "eq1";
        case EstimateId::Eq2: return "eq2";
    }
    return "unknown";
}

double trend_slope(const std::vector<int>& n_values, const std::vector<double>& ratios) {
    if (n_values.size() != ratios.size()) throw DomainError("trend_slope: size mismatch");
    const std::size_t start = n_values.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = start; i < n_values.size(); ++i) {
        if (!(ratios[i] > 0.0)) continue;
        const double x = std::log(static_cast<double>(n_values[i]));
        const double y = std::log(ratios[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return 0.0;
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (count * sxy - sx * sy) / denom;
}

std::array<EstimateReport, 4> verify_product_estimates(const std::array<CoefficientPair, 4>& pairs, IndexRange range,
                                                       const EstimateOptions& options) {
    check_alpha(options.alpha);
    check_range(range);

    std::array<ModeSet, 4> modes;
    parallel_for(4, [&](int i) { modes[static_cast<std::size_t>(i)] = modes_for(pairs[static_cast<std::size_t>(i)], range.last, options); });

    const double norm = pair_distance(pairs[0], pairs[1]) + pair_distance(pairs[0], pairs[2]) +
                        pair_distance(pairs[0], pairs[3]);

    const std::array<EstimateId, 4> ids{EstimateId::A1, EstimateId::A2, EstimateId::B1, EstimateId::B2};
    std::array<EstimateReport, 4> out;
    for (int e = 0; e < 4; ++e) {
        const bool dn = ids[e] == EstimateId::A2 || ids[e] == EstimateId::B2;
        const bool derivative = ids[e] == EstimateId::B1 || ids[e] == EstimateId::B2;
        EstimateReport& r = out[static_cast<std::size_t>(e)];
        r.id = ids[e];
        r.alpha = options.alpha;
        r.norm_factor = norm;
        for (int n = range.first; n <= range.last; ++n) {
            auto y = [&](int which) -> const EigenPair& {
                const ModeSet& m = modes[static_cast<std::size_t>(which)];
                return (dn ? m.dirichlet_neumann : m.dirichlet)[static_cast<std::size_t>(n - 1)];
            };
            const double s = scale_for(y(0), derivative);
            const auto& y1 = pick(y(0), derivative);
            const auto& y2 = pick(y(1), derivative);
            const auto& y3 = pick(y(2), derivative);
            const auto& y4 = pick(y(3), derivative);
            double sup = 0.0;
            for (std::size_t i = 0; i < y1.size(); ++i)
                sup = std::max(sup, std::abs(y1[i] * y2[i] - y3[i] * y4[i]) * s * s);
            r.n_values.push_back(n);
            r.lhs.push_back(sup);
            r.ratios.push_back(ratio(sup, norm, n, options.alpha));
        }
        finish(r);
    }
    return out;
}

EstimateReport difference_report(EstimateId id, const std::vector<EigenPair>& first,
                                 const std::vector<EigenPair>& second, double norm_factor, IndexRange range,
                                 double alpha) {
    check_alpha(alpha);
    check_range(range);
    if (id != EstimateId::Eq1 && id != EstimateId::Eq2) throw DomainError("difference_report handles eq1/eq2 only");
    if (static_cast<int>(first.size()) < range.last || static_cast<int>(second.size()) < range.last)
        throw PreconditionError("eigenpairs missing for the requested index range");
    const bool derivative = id == EstimateId::Eq2;

    EstimateReport r;
    r.id = id;
    r.alpha = alpha;
    r.norm_factor = norm_factor;
    for (int n = range.first; n <= range.last; ++n) {
        const EigenPair& a = first[static_cast<std::size_t>(n - 1)];
        const EigenPair& b = second[static_cast<std::size_t>(n - 1)];
        const auto& ya = pick(a, derivative);
        const auto& yb = pick(b, derivative);
        if (ya.size() != yb.size()) throw PreconditionError("eigenfunctions sampled on different grids");
        const double s = scale_for(a, derivative);
        double sup = 0.0;
        for (std::size_t i = 0; i < ya.size(); ++i) sup = std::max(sup, std::abs(ya[i] - yb[i]) * s);
        r.n_values.push_back(n);
        r.lhs.push_back(sup);
        r.ratios.push_back(ratio(sup, norm_factor, n, alpha));
    }
    finish(r);
    return r;
}

std::array<EstimateReport, 2> verify_difference_estimates(const CoefficientPair& p1, const CoefficientPair& p2,
                                                          IndexRange range, const EstimateOptions& options) {
    check_alpha(options.alpha);
    check_range(range);
    const ModeSet a = modes_for(p1, range.last, options);
    const ModeSet b = modes_for(p2, range.last, options);
    const double norm = pair_distance(p1, p2);
    return {difference_report(EstimateId::Eq1, a.dirichlet_neumann, b.dirichlet_neumann, norm, range, options.alpha),
            difference_report(EstimateId::Eq2, a.dirichlet_neumann, b.dirichlet_neumann, norm, range, options.alpha)};
}

SupBoundsReport verify_sup_bounds(const CoefficientPair& pair, IndexRange range, const EstimateOptions& options) {
    check_range(range);
    const ModeSet m = modes_for(pair, range.last, options);
    SupBoundsReport r;
    for (int n = range.first; n <= range.last; ++n) {
        const EigenPair& e = m.dirichlet_neumann[static_cast<std::size_t>(n - 1)];
        const double s = 1.0 / wavenumber(e.kind, n);
        double sv = 0.0, sd = 0.0;
        for (std::size_t i = 0; i < e.samples.size(); ++i) {
            sv = std::max(sv, std::abs(e.samples[i]));
            sd = std::max(sd, std::abs(e.derivative_samples[i]) * s);
        }
        r.n_values.push_back(n);
        r.sup_values.push_back(sv);
        r.sup_derivatives.push_back(sd);
        r.max_value = std::max(r.max_value, sv);
        r.max_derivative = std::max(r.max_derivative, sd);
    }
    return r;
}

double sup_bound_constant(double c, double m, int n, double alpha) {
    if (c < 0.0 || m < 0.0 || n < 1) throw DomainError("sup_bound_constant needs C, M >= 0 and N >= 1");
    return std::sqrt(2.0 + 2.0 * c * m * std::pow(n, 2.0 - alpha));
}

int disjointness_index(double r, double alpha) {
    check_alpha(alpha);
    if (!(r > 0.0)) throw DomainError("radius factor r must be positive");
    auto mu0 = [](long n) { return unperturbed_eigenvalue(0.0, 0.0, BoundaryKind::DirichletNeumann, static_cast<int>(n)); };
    auto gap = [&](long n) {
        return (mu0(n + 1) - r * std::pow(n + 1, alpha)) - (mu0(n) + r * std::pow(n, alpha));
    };
    // mu_{n+1}(0) - mu_n(0) >= 4 pi^4 (n+1/2)^3 and (n+1/2)^3 / (n+1)^alpha is
    // increasing, so the gap is positive for every n past the first index where
    // 4 pi^4 (n+1/2)^3 > 2 r (n+1)^alpha.
    constexpr long kLimit = 10'000'000;
    const double pi4 = std::pow(kPi, 4);
    long safe = 1;
    while (4.0 * pi4 * std::pow(safe + 0.5, 3) <= 2.0 * r * std::pow(safe + 1.0, alpha)) {
        if (++safe > kLimit) throw DomainError("r too large: disjointness index beyond the search limit");
    }
    for (long n = safe - 1; n >= 1; --n)
        if (gap(n) <= 0.0) return static_cast<int>(n + 1);
    return 1;
}

LocalizationReport verify_localization(const CoefficientPair& pair, double alpha, double r, IndexRange range) {
    check_alpha(alpha);
    check_range(range);
    if (!(r > 0.0)) throw DomainError("radius factor r must be positive");

    LocalizationReport rep;
    rep.alpha = alpha;
    rep.r = r;
    rep.disjointness_index = disjointness_index(r, alpha);
    const int big = rep.disjointness_index;
    const double big_radius =
        unperturbed_eigenvalue(0.0, 0.0, BoundaryKind::DirichletNeumann, big) + r * std::pow(big, alpha);

    SpectrumOptions so;
    so.eigenfunctions = false;
    const Spectrum mu = compute_spectrum(pair, BoundaryKind::DirichletNeumann, range.last, so).spectrum;

    rep.first_contained = range.last + 1;
    bool tail_ok = true;
    for (int n = range.last; n >= range.first; --n) {
        const double center = unperturbed_eigenvalue(0.0, 0.0, BoundaryKind::DirichletNeumann, n);
        const double dist = std::abs(mu.value(n) - center);
        tail_ok = tail_ok && dist < r * std::pow(n, alpha);
        if (tail_ok) rep.first_contained = n;
        rep.minimal_r = std::max(rep.minimal_r, dist / std::pow(n, alpha));
    }
    rep.all_in_region = true;
    for (int n = range.first; n <= range.last; ++n) {
        const double z = mu.value(n);
        const double center = unperturbed_eigenvalue(0.0, 0.0, BoundaryKind::DirichletNeumann, n);
        const double radius = r * std::pow(n, alpha);
        const double dist = std::abs(z - center);
        bool region = std::abs(z) < big_radius;
        for (int m = big + 1; m <= range.last + 1 && !region; ++m)
            region = std::abs(z - unperturbed_eigenvalue(0.0, 0.0, BoundaryKind::DirichletNeumann, m)) <
                     r * std::pow(m, alpha);
        rep.n_values.push_back(n);
        rep.eigenvalues.push_back(z);
        rep.distances.push_back(dist);
        rep.radii.push_back(radius);
        rep.in_own_disk.push_back(dist < radius);
        rep.in_region.push_back(region);
        rep.all_in_region = rep.all_in_region && region;
    }
    return rep;
}

FormIdentityReport verify_form_identity(const CoefficientPair& p1, const CoefficientPair& p2, BoundaryKind kind,
                                        int n) {
    if (n < 1) throw DomainError("mode index must be >= 1");
    SpectrumOptions so;
    so.dimension = std::max(truncation_dimension(n, p1.highest_mode()), truncation_dimension(n, p2.highest_mode()));
    so.grid_intervals = std::max(2048, 64 * n);
    const EigenPair a = compute_spectrum(p1, kind, n, so).pairs.back();
    const EigenPair b = compute_spectrum(p2, kind, n, so).pairs.back();

    double bending = 0.0;
    for (Eigen::Index m = 0; m < a.coeffs.size(); ++m) {
        const double k = wavenumber(kind, static_cast<int>(m) + 1);
        bending += k * k * k * k * a.coeffs(m) * b.coeffs(m);
    }
    const std::size_t pts = a.samples.size();
    std::vector<double> shear(pts), potential(pts), overlap(pts), dshear(pts), dpot(pts);
    for (std::size_t i = 0; i < pts; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(pts - 1);
        const double dd = a.derivative_samples[i] * b.derivative_samples[i];
        const double vv = a.samples[i] * b.samples[i];
        shear[i] = p1.p(x) * dd;
        potential[i] = p1.q(x) * vv;
        overlap[i] = vv;
        dshear[i] = (p1.p(x) - p2.p(x)) * dd;
        dpot[i] = (p1.q(x) - p2.q(x)) * vv;
    }
    FormIdentityReport r;
    r.eigenvalue = a.value;
    const double ov = simpson(overlap);
    r.lhs = bending + simpson(shear) + simpson(potential);
    r.rhs = a.value * ov;
    r.residual = std::abs(r.lhs - r.rhs);
    r.subtraction_lhs = simpson(dshear) + simpson(dpot);
    r.subtraction_rhs = (a.value - b.value) * ov;
    r.subtraction_residual = std::abs(r.subtraction_lhs - r.subtraction_rhs);
    return r;
}

}  // namespace twospec

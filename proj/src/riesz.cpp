#include "twospec/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "twospec/errors.hpp"
#include "twospec/parallel.hpp"

namespace twospec {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

void check_set(const EigenfunctionSet& s, int n_max) {
    if (static_cast<int>(s.dirichlet.size()) < n_max || static_cast<int>(s.dirichlet_neumann.size()) < n_max)
        throw PreconditionError("eigenfunctions missing for the requested n_max");
    const auto expected = static_cast<std::size_t>(s.grid_intervals) + 1;
    for (const auto* v : {&s.dirichlet, &s.dirichlet_neumann})
        for (int n = 0; n < n_max; ++n)
            if ((*v)[n].samples.size() != expected || (*v)[n].derivative_samples.size() != expected)
                throw PreconditionError("eigenfunction samples do not match the family grid");
}

enum class Use { Values, Derivatives };

Family build_family(const EigenfunctionSet& a, const EigenfunctionSet& b, int n_max, Use use) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    if (a.grid_intervals != b.grid_intervals) throw PreconditionError("eigenfunction sets use different grids");
    check_set(a, n_max);
    check_set(b, n_max);

    const int grid = a.grid_intervals;
    Family f;
    f.grid_intervals = grid;
    f.members.resize(static_cast<std::size_t>(2 * n_max + 1));
    f.members[0] = FamilyMember{0, MemberLabel::Unit, std::vector<double>(static_cast<std::size_t>(grid) + 1, 1.0)};

    parallel_for(2 * n_max, [&](int j) {
        const int m = j + 1;
        const int n = (m + 1) / 2;
        const bool odd = (m % 2) == 1;
        const BoundaryKind kind = odd ? BoundaryKind::DirichletNeumann : BoundaryKind::Dirichlet;
        const EigenPair& ya = odd ? a.dirichlet_neumann[n - 1] : a.dirichlet[n - 1];
        const EigenPair& yb = odd ? b.dirichlet_neumann[n - 1] : b.dirichlet[n - 1];

        FamilyMember member;
        member.index = m;
        member.samples.resize(static_cast<std::size_t>(grid) + 1);
        if (use == Use::Values) {
            member.label = odd ? MemberLabel::PsiProduct : MemberLabel::PhiProduct;
            for (std::size_t i = 0; i < member.samples.size(); ++i)
                member.samples[i] = kSqrt2 * (1.0 - ya.samples[i] * yb.samples[i]);
        } else {
            member.label = odd ? MemberLabel::PsiDerivativeProduct : MemberLabel::PhiDerivativeProduct;
            const double k = wavenumber(kind, n);
            const double scale = 1.0 / (2.0 * k * k);
            for (std::size_t i = 0; i < member.samples.size(); ++i)
                member.samples[i] =
                    2.0 * kSqrt2 * (ya.derivative_samples[i] * yb.derivative_samples[i] * scale - 0.5);
        }
        f.members[static_cast<std::size_t>(m)] = std::move(member);
    });
    return f;
}

}  // namespace

const char* to_string(MemberLabel label) noexcept {
    switch (label) {
        case MemberLabel::Unit: return "unit";
        case MemberLabel::PhiProduct: return "phi-product";
        case MemberLabel::PsiProduct: return "psi-product";
        case MemberLabel::PhiDerivativeProduct: return "phi-derivative-product";
        case MemberLabel::PsiDerivativeProduct: return "psi-derivative-product";
        case MemberLabel::ReferenceCosine: return "reference-cosine";
    }
    return "unknown";
}

const char* to_string(FamilyKind kind) noexcept {
    return kind == FamilyKind::Value ? "value" : "derivative";
}

int default_family_grid(int n_max) noexcept {
    const int m = std::max(256, 16 * n_max);
    return m + (m % 2);
}

EigenfunctionSet eigenfunction_set(const CoefficientPair& pair, int n_max, int grid_intervals) {
    EigenfunctionSet s;
    s.grid_intervals = grid_intervals;
    SpectrumOptions opt;
    opt.grid_intervals = grid_intervals;
    s.dirichlet = compute_spectrum(pair, BoundaryKind::Dirichlet, n_max, opt).pairs;
    s.dirichlet_neumann = compute_spectrum(pair, BoundaryKind::DirichletNeumann, n_max, opt).pairs;
    return s;
}

Family build_value_family(const EigenfunctionSet& first, const EigenfunctionSet& second, int n_max) {
    return build_family(first, second, n_max, Use::Values);
}

Family build_value_family(const CoefficientPair& p1, const CoefficientPair& p2, int n_max, int grid_intervals) {
    const int grid = grid_intervals > 0 ? grid_intervals : default_family_grid(n_max);
    return build_value_family(eigenfunction_set(p1, n_max, grid), eigenfunction_set(p2, n_max, grid), n_max);
}

Family build_derivative_family(const EigenfunctionSet& first, const EigenfunctionSet& second, int n_max) {
    return build_family(first, second, n_max, Use::Derivatives);
}

Family build_derivative_family(const CoefficientPair& p1, const CoefficientPair& p2, int n_max,
                               int grid_intervals) {
    const int grid = grid_intervals > 0 ? grid_intervals : default_family_grid(n_max);
    return build_derivative_family(eigenfunction_set(p1, n_max, grid), eigenfunction_set(p2, n_max, grid), n_max);
}

Family reference_family(int n_max, int grid_intervals) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    if (grid_intervals < 2 || grid_intervals % 2 != 0) throw DomainError("family grid needs an even interval count");
    Family f;
    f.grid_intervals = grid_intervals;
    const auto pts = static_cast<std::size_t>(grid_intervals) + 1;
    f.members.push_back(FamilyMember{0, MemberLabel::Unit, std::vector<double>(pts, 1.0)});
    for (int m = 1; m <= 2 * n_max; ++m) {
        const int n = (m + 1) / 2;
        const int freq = (m % 2 == 1) ? 2 * n + 1 : 2 * n;
        FamilyMember member{m, MemberLabel::ReferenceCosine, std::vector<double>(pts)};
        for (std::size_t i = 0; i < pts; ++i)
            member.samples[i] = kSqrt2 * std::cos(freq * kPi * (static_cast<double>(i) / grid_intervals));
        f.members.push_back(std::move(member));
    }
    return f;
}

double inner_product(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DomainError("inner product of samples on different grids");
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    return simpson(prod);
}

PerturbationSum perturbation_sum(const Family& d, const Family& e) {
    if (d.grid_intervals != e.grid_intervals) throw DomainError("families sampled on different grids");
    if (d.size() != e.size()) throw DomainError("families have different lengths");
    PerturbationSum out;
    out.terms.resize(static_cast<std::size_t>(d.size()));
    for (int m = 0; m < d.size(); ++m) {
        const auto& a = d.members[static_cast<std::size_t>(m)].samples;
        const auto& b = e.members[static_cast<std::size_t>(m)].samples;
        if (a.size() != b.size()) throw DomainError("family members sampled on different grids");
        std::vector<double> diff2(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) diff2[i] = (a[i] - b[i]) * (a[i] - b[i]);
        out.terms[static_cast<std::size_t>(m)] = simpson(diff2);
    }
    for (double t : out.terms) out.total += t;
    return out;
}

double tail_estimate(const std::vector<double>& terms, double decay_exponent) {
    const int last = static_cast<int>(terms.size()) - 1;
    if (last < 1) return 0.0;
    if (!(decay_exponent > 1.0)) throw DomainError("tail decay exponent must exceed 1");
    double envelope = 0.0;
    for (int m = std::max(1, last / 2); m <= last; ++m)
        envelope = std::max(envelope, terms[static_cast<std::size_t>(m)] * std::pow(m, decay_exponent));
    // Euler-Maclaurin for sum_{m > last} m^-s.
    const double s = decay_exponent;
    const double l = last;
    const double zeta_tail = std::pow(l, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(l, -s) + s / 12.0 * std::pow(l, -s - 1.0);
    return envelope * zeta_tail;
}

Eigen::MatrixXd gram_matrix(const Family& family) {
    const int n = family.size();
    Eigen::MatrixXd g(n, n);
    parallel_for(n, [&](int i) {
        for (int j = i; j < n; ++j)
            g(i, j) = inner_product(family.members[static_cast<std::size_t>(i)].samples,
                                    family.members[static_cast<std::size_t>(j)].samples);
    });
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
}

FrameBounds frame_bounds(const Family& family) {
    if (family.size() == 0) throw DomainError("empty family");
    const Eigen::MatrixXd g = gram_matrix(family);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("Gram eigenvalue computation failed");
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(hi > 0.0) || lo <= 1e-10 * hi) throw DegeneracyError("Gram matrix is rank deficient");
    return FrameBounds{lo, hi};
}

RieszReport riesz_check(const EigenfunctionSet& first, const EigenfunctionSet& second, FamilyKind kind, int n_max) {
    const Family d = kind == FamilyKind::Value ? build_value_family(first, second, n_max)
                                               : build_derivative_family(first, second, n_max);
    const Family e = reference_family(n_max, d.grid_intervals);
    const PerturbationSum sum = perturbation_sum(d, e);
    const FrameBounds fb = frame_bounds(d);
    const FrameBounds ref = frame_bounds(e);

    RieszReport r;
    r.kind = kind;
    r.n_max = n_max;
    r.grid_intervals = d.grid_intervals;
    r.perturbation_sum = sum.total;
    r.terms = sum.terms;
    r.tail_estimate = tail_estimate(sum.terms);
    r.frame_lower = fb.lower;
    r.frame_upper = fb.upper;
    r.reference_lower = ref.lower;
    r.reference_upper = ref.upper;
    r.passes_le3 = r.perturbation_sum + r.tail_estimate < ref.lower * ref.lower / ref.upper;
    return r;
}

RieszReport riesz_check(const CoefficientPair& p1, const CoefficientPair& p2, FamilyKind kind, int n_max,
                        int grid_intervals) {
    const int grid = grid_intervals > 0 ? grid_intervals : default_family_grid(n_max);
    return riesz_check(eigenfunction_set(p1, n_max, grid), eigenfunction_set(p2, n_max, grid), kind, n_max);
}

}  // namespace twospec

#include "twospec/twospec.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "twospec/coefficient.hpp"
#include "twospec/errors.hpp"
#include "twospec/estimates.hpp"
#include "twospec/inverse.hpp"
#include "twospec/parallel.hpp"
#include "twospec/riesz.hpp"
#include "twospec/spectra.hpp"

using namespace twospec;

struct ts_coeff {
    CoefficientFunction value;
};
struct ts_spectrum {
    SpectrumResult result;
};
struct ts_degeneracy {
    DegeneracyReport report;
};
struct ts_riesz_report {
    RieszReport report;
};
struct ts_estimate_set {
    std::vector<EstimateReport> reports;
};
struct ts_sup_report {
    SupBoundsReport report;
};
struct ts_loc_report {
    LocalizationReport report;
};
struct ts_inverse_problem {
    InverseProblem problem;
};
struct ts_reconstruction {
    ReconstructionResult result;
};
struct ts_probe_report {
    ProbeReport report;
};

namespace {

thread_local std::string g_last_error;

ts_status fail(ts_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <class F>
ts_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return TS_OK;
    } catch (const Error& e) {
        return fail(static_cast<ts_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(TS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TS_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

template <class T>
void require_out(T** out) {
    require(out != nullptr, "output pointer is NULL");
    *out = nullptr;
}

void require_cap(size_t cap, size_t needed) {
    if (cap < needed) throw DomainError("output buffer too small (need " + std::to_string(needed) + ")");
}

BoundaryKind to_kind(ts_boundary b) {
    if (b == TS_DIRICHLET) return BoundaryKind::Dirichlet;
    if (b == TS_DIRICHLET_NEUMANN) return BoundaryKind::DirichletNeumann;
    throw DomainError("unknown boundary kind");
}

ts_boundary from_kind(BoundaryKind k) { return k == BoundaryKind::Dirichlet ? TS_DIRICHLET : TS_DIRICHLET_NEUMANN; }

Slot to_slot(ts_slot s) {
    if (s == TS_SLOT_P) return Slot::P;
    if (s == TS_SLOT_Q) return Slot::Q;
    throw DomainError("unknown slot");
}

CoefficientFunction coeff_or_zero(const ts_coeff* c) { return c ? c->value : CoefficientFunction::constant(0.0); }

CoefficientPair to_pair(ts_pair p) { return CoefficientPair{coeff_or_zero(p.p), coeff_or_zero(p.q)}; }

EstimateOptions to_options(const ts_estimate_options* o, IndexRange* range) {
    const ts_estimate_options d = o ? *o : ts_estimate_options_default();
    EstimateOptions e;
    e.alpha = d.alpha;
    e.ball_radius = d.ball_radius;
    e.degeneracy_tol = d.degeneracy_tol;
    e.points_per_mode = d.points_per_mode;
    require(e.points_per_mode >= 2, "points_per_mode must be >= 2");
    range->first = d.first;
    range->last = d.last;
    return e;
}

ts_exceptional to_c(const ExceptionalMatch& m) {
    return ts_exceptional{from_kind(m.kind), m.k, m.t, m.first, m.second, m.a1};
}

const EigenPair& pair_at(const ts_spectrum* s, int n) {
    require(s != nullptr, "spectrum handle is NULL");
    if (s->result.pairs.empty()) throw PreconditionError("spectrum was computed without eigenfunctions");
    require(n >= 1 && n <= static_cast<int>(s->result.pairs.size()), "mode index out of range");
    return s->result.pairs[static_cast<std::size_t>(n - 1)];
}

const std::vector<std::vector<int>>& clusters_of(const ts_degeneracy* d, ts_boundary kind) {
    require(d != nullptr, "degeneracy handle is NULL");
    return to_kind(kind) == BoundaryKind::Dirichlet ? d->report.dirichlet_clusters
                                                    : d->report.dirichlet_neumann_clusters;
}

const EstimateReport& report_at(const ts_estimate_set* s, size_t i) {
    require(s != nullptr, "estimate set handle is NULL");
    require(i < s->reports.size(), "estimate index out of range");
    return s->reports[i];
}

}  // namespace

extern "C" {

const char* ts_last_error(void) { return g_last_error.c_str(); }

const char* ts_version(void) { return "1.0.0"; }

const char* ts_status_name(ts_status status) {
    switch (status) {
        case TS_OK: return "ok";
        case TS_ERR_USAGE: return "usage";
        case TS_ERR_VALIDATION: return "validation";
        case TS_ERR_NUMERIC: return "numeric";
        case TS_ERR_DEGENERACY: return "degeneracy";
        case TS_ERR_NONCONVERGENCE: return "non-convergence";
        case TS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void ts_set_threads(int n) { set_thread_count(n); }
int ts_get_threads(void) { return thread_count(); }

/* ---- coefficients ---- */

ts_status ts_coeff_series(double c0, const double* cosine, size_t n_cos, const double* sine, size_t n_sin,
                          ts_coeff** out) {
    return guarded([&] {
        require_out(out);
        require(n_cos == 0 || cosine != nullptr, "cosine array is NULL");
        require(n_sin == 0 || sine != nullptr, "sine array is NULL");
        std::vector<double> a(cosine, cosine + n_cos), b(sine, sine + n_sin);
        *out = new ts_coeff{CoefficientFunction::series(c0, std::move(a), std::move(b))};
    });
}

ts_status ts_coeff_from_json(const char* json, ts_coeff** out) {
    return guarded([&] {
        require_out(out);
        require(json != nullptr, "JSON text is NULL");
        *out = new ts_coeff{coefficient_from_json(json)};
    });
}

ts_status ts_coeff_from_grid(const double* samples, size_t count, int max_modes, ts_coeff** out) {
    return guarded([&] {
        require_out(out);
        require(samples != nullptr, "sample array is NULL");
        *out = new ts_coeff{CoefficientFunction::from_grid(std::vector<double>(samples, samples + count), max_modes)};
    });
}

ts_status ts_coeff_clone(const ts_coeff* c, ts_coeff** out) {
    return guarded([&] {
        require_out(out);
        require(c != nullptr, "coefficient handle is NULL");
        *out = new ts_coeff{c->value};
    });
}

void ts_coeff_free(ts_coeff* c) { delete c; }

ts_status ts_coeff_eval(const ts_coeff* c, double x, double* out) {
    return guarded([&] {
        require(c != nullptr && out != nullptr, "NULL argument");
        *out = c->value(x);
    });
}

ts_status ts_coeff_l2_norm(const ts_coeff* c, double* out) {
    return guarded([&] {
        require(c != nullptr && out != nullptr, "NULL argument");
        *out = c->value.l2_norm();
    });
}

size_t ts_coeff_modes(const ts_coeff* c) {
    if (!c) return 0;
    return std::max(c->value.cosine_coeffs().size(), c->value.sine_coeffs().size());
}

ts_status ts_coeff_terms(const ts_coeff* c, double* c0, double* cosine, double* sine, size_t cap) {
    return guarded([&] {
        require(c != nullptr, "coefficient handle is NULL");
        const size_t modes = ts_coeff_modes(c);
        if (c0) *c0 = c->value.constant_part();
        if (cosine || sine) require_cap(cap, modes);
        const auto a = c->value.cosine_coeffs();
        const auto b = c->value.sine_coeffs();
        for (size_t k = 0; k < modes; ++k) {
            if (cosine) cosine[k] = k < a.size() ? a[k] : 0.0;
            if (sine) sine[k] = k < b.size() ? b[k] : 0.0;
        }
    });
}

ts_status ts_coeff_to_json(const ts_coeff* c, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        require(c != nullptr, "coefficient handle is NULL");
        const std::string text = coefficient_to_json(c->value);
        if (needed) *needed = text.size() + 1;
        if (!buf) return;
        require_cap(cap, text.size() + 1);
        std::memcpy(buf, text.c_str(), text.size() + 1);
    });
}

ts_status ts_random_pair(const double center[2], double radius, int modes, uint64_t seed, ts_coeff** p,
                         ts_coeff** q) {
    return guarded([&] {
        require_out(p);
        require_out(q);
        require(center != nullptr, "center is NULL");
        CoefficientPair pair = random_pair({center[0], center[1]}, radius, modes, seed);
        auto pp = std::make_unique<ts_coeff>(ts_coeff{std::move(pair.p)});
        *q = new ts_coeff{std::move(pair.q)};
        *p = pp.release();
    });
}

/* ---- spectra ---- */

ts_spectrum_options ts_spectrum_options_default(void) { return ts_spectrum_options{0, 0, 1}; }

ts_status ts_spectrum_compute(ts_pair pair, ts_boundary kind, int n_max, const ts_spectrum_options* options,
                              ts_spectrum** out) {
    return guarded([&] {
        require_out(out);
        const ts_spectrum_options o = options ? *options : ts_spectrum_options_default();
        SpectrumOptions so;
        so.dimension = o.dimension;
        so.grid_intervals = o.grid_intervals;
        so.eigenfunctions = o.eigenfunctions != 0;
        *out = new ts_spectrum{compute_spectrum(to_pair(pair), to_kind(kind), n_max, so)};
    });
}

void ts_spectrum_free(ts_spectrum* s) { delete s; }

int ts_spectrum_count(const ts_spectrum* s) { return s ? s->result.spectrum.n_max() : 0; }

int ts_spectrum_dimension(const ts_spectrum* s) { return s ? s->result.spectrum.dimension_used : 0; }

ts_boundary ts_spectrum_kind(const ts_spectrum* s) {
    return s ? from_kind(s->result.spectrum.kind) : TS_DIRICHLET;
}

ts_status ts_spectrum_values(const ts_spectrum* s, double* out, size_t cap) {
    return guarded([&] {
        require(s != nullptr && out != nullptr, "NULL argument");
        const auto& v = s->result.spectrum.values;
        require_cap(cap, v.size());
        std::copy(v.begin(), v.end(), out);
    });
}

ts_status ts_spectrum_residual(const ts_spectrum* s, int n, double* out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = pair_at(s, n).residual;
    });
}

int ts_spectrum_grid_intervals(const ts_spectrum* s) {
    if (!s || s->result.pairs.empty()) return 0;
    return s->result.pairs.front().grid_intervals;
}

ts_status ts_spectrum_eigenfunction(const ts_spectrum* s, int n, double* values, double* derivatives, size_t cap) {
    return guarded([&] {
        const EigenPair& e = pair_at(s, n);
        require_cap(cap, e.samples.size());
        if (values) std::copy(e.samples.begin(), e.samples.end(), values);
        if (derivatives) std::copy(e.derivative_samples.begin(), e.derivative_samples.end(), derivatives);
    });
}

ts_status ts_spectrum_frechet(const ts_spectrum* s, int n, ts_pair delta, double* out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = frechet_eigenvalue_derivative(pair_at(s, n), to_pair(delta));
    });
}

ts_status ts_spectrum_asymptotic_fit(const ts_spectrum* s, double* slope, double* intercept) {
    return guarded([&] {
        require(s != nullptr, "spectrum handle is NULL");
        const AsymptoticFit fit = asymptotic_fit(s->result.spectrum);
        if (slope) *slope = fit.slope;
        if (intercept) *intercept = fit.intercept;
    });
}

ts_status ts_unperturbed_eigenvalue(double a1, double a2, ts_boundary kind, int n, double* out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = unperturbed_eigenvalue(a1, a2, to_kind(kind), n);
    });
}

int ts_truncation_dimension(int n_max, int series_length) { return truncation_dimension(n_max, series_length); }

/* ---- degeneracy ---- */

ts_status ts_exceptional_lines(double lo, double hi, int index_limit, ts_exceptional* out, size_t cap,
                               size_t* count) {
    return guarded([&] {
        require(index_limit >= 1, "index_limit must be >= 1");
        const auto lines = exceptional_lines(lo, hi, index_limit);
        if (count) *count = lines.size();
        if (!out) return;
        require_cap(cap, lines.size());
        for (size_t i = 0; i < lines.size(); ++i) out[i] = to_c(lines[i]);
    });
}

ts_status ts_match_exceptional(double a1, int index_limit, ts_exceptional* out, int* found) {
    return guarded([&] {
        require(found != nullptr, "NULL argument");
        const auto m = match_exceptional_constant(a1, index_limit);
        *found = m ? 1 : 0;
        if (m && out) *out = to_c(*m);
    });
}

ts_status ts_degeneracy_detect(const ts_spectrum* dirichlet, const ts_spectrum* dirichlet_neumann, double tol,
                               const double* constant, ts_degeneracy** out) {
    return guarded([&] {
        require_out(out);
        require(dirichlet != nullptr && dirichlet_neumann != nullptr, "spectrum handle is NULL");
        std::optional<std::array<double, 2>> c;
        if (constant) c = std::array<double, 2>{constant[0], constant[1]};
        *out = new ts_degeneracy{
            detect_degeneracy(dirichlet->result.spectrum, dirichlet_neumann->result.spectrum, tol, c)};
    });
}

void ts_degeneracy_free(ts_degeneracy* d) { delete d; }

int ts_degeneracy_in_w(const ts_degeneracy* d) { return d && d->report.in_W ? 1 : 0; }

size_t ts_degeneracy_cluster_count(const ts_degeneracy* d, ts_boundary kind) {
    try {
        return clusters_of(d, kind).size();
    } catch (...) {
        return 0;
    }
}

size_t ts_degeneracy_cluster_size(const ts_degeneracy* d, ts_boundary kind, size_t i) {
    try {
        const auto& c = clusters_of(d, kind);
        return i < c.size() ? c[i].size() : 0;
    } catch (...) {
        return 0;
    }
}

ts_status ts_degeneracy_cluster(const ts_degeneracy* d, ts_boundary kind, size_t i, int* indices, size_t cap) {
    return guarded([&] {
        const auto& c = clusters_of(d, kind);
        require(i < c.size(), "cluster index out of range");
        require(indices != nullptr, "NULL argument");
        require_cap(cap, c[i].size());
        std::copy(c[i].begin(), c[i].end(), indices);
    });
}

ts_status ts_degeneracy_exceptional(const ts_degeneracy* d, ts_exceptional* out, int* found) {
    return guarded([&] {
        require(d != nullptr && found != nullptr, "NULL argument");
        *found = d->report.exceptional_constant ? 1 : 0;
        if (d->report.exceptional_constant && out) *out = to_c(*d->report.exceptional_constant);
    });
}

/* ---- Riesz ---- */

ts_status ts_riesz_check(ts_pair first, ts_pair second, ts_family kind, int n_max, int grid_intervals,
                         ts_riesz_report** out) {
    return guarded([&] {
        require_out(out);
        require(kind == TS_FAMILY_VALUE || kind == TS_FAMILY_DERIVATIVE, "unknown family kind");
        const FamilyKind fk = kind == TS_FAMILY_VALUE ? FamilyKind::Value : FamilyKind::Derivative;
        *out = new ts_riesz_report{riesz_check(to_pair(first), to_pair(second), fk, n_max, grid_intervals)};
    });
}

void ts_riesz_report_free(ts_riesz_report* r) { delete r; }

ts_status ts_riesz_report_summary(const ts_riesz_report* r, ts_riesz_summary* out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "NULL argument");
        const RieszReport& x = r->report;
        *out = ts_riesz_summary{x.kind == FamilyKind::Value ? TS_FAMILY_VALUE : TS_FAMILY_DERIVATIVE,
                                x.n_max,
                                x.grid_intervals,
                                x.perturbation_sum,
                                x.tail_estimate,
                                x.frame_lower,
                                x.frame_upper,
                                x.reference_lower,
                                x.reference_upper,
                                x.passes_le3 ? 1 : 0,
                                x.terms.size()};
    });
}

ts_status ts_riesz_report_terms(const ts_riesz_report* r, double* out, size_t cap) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "NULL argument");
        require_cap(cap, r->report.terms.size());
        std::copy(r->report.terms.begin(), r->report.terms.end(), out);
    });
}

/* ---- estimates ---- */

ts_estimate_options ts_estimate_options_default(void) {
    const EstimateOptions e;
    const IndexRange r;
    return ts_estimate_options{e.alpha, e.ball_radius, e.degeneracy_tol, e.points_per_mode, r.first, r.last};
}

ts_status ts_verify_products(const ts_pair pairs[4], const ts_estimate_options* options, ts_estimate_set** out) {
    return guarded([&] {
        require_out(out);
        require(pairs != nullptr, "pair array is NULL");
        IndexRange range;
        const EstimateOptions opt = to_options(options, &range);
        const std::array<CoefficientPair, 4> p{to_pair(pairs[0]), to_pair(pairs[1]), to_pair(pairs[2]),
                                               to_pair(pairs[3])};
        const auto reports = verify_product_estimates(p, range, opt);
        *out = new ts_estimate_set{std::vector<EstimateReport>(reports.begin(), reports.end())};
    });
}

ts_status ts_verify_differences(ts_pair first, ts_pair second, const ts_estimate_options* options,
                                ts_estimate_set** out) {
    return guarded([&] {
        require_out(out);
        IndexRange range;
        const EstimateOptions opt = to_options(options, &range);
        const auto reports = verify_difference_estimates(to_pair(first), to_pair(second), range, opt);
        *out = new ts_estimate_set{std::vector<EstimateReport>(reports.begin(), reports.end())};
    });
}

void ts_estimate_set_free(ts_estimate_set* s) { delete s; }

size_t ts_estimate_set_count(const ts_estimate_set* s) { return s ? s->reports.size() : 0; }

ts_status ts_estimate_set_summary(const ts_estimate_set* s, size_t i, ts_estimate_summary* out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        const EstimateReport& r = report_at(s, i);
        *out = ts_estimate_summary{static_cast<ts_estimate_id>(r.id), r.alpha, r.norm_factor, r.max_ratio,
                                   r.trend_slope, r.passed ? 1 : 0, r.n_values.size()};
    });
}

ts_status ts_estimate_set_series(const ts_estimate_set* s, size_t i, int* n_values, double* lhs, double* ratios,
                                 size_t cap) {
    return guarded([&] {
        const EstimateReport& r = report_at(s, i);
        require_cap(cap, r.n_values.size());
        if (n_values) std::copy(r.n_values.begin(), r.n_values.end(), n_values);
        if (lhs) std::copy(r.lhs.begin(), r.lhs.end(), lhs);
        if (ratios) std::copy(r.ratios.begin(), r.ratios.end(), ratios);
    });
}

const char* ts_estimate_name(ts_estimate_id id) { return to_string(static_cast<EstimateId>(id)); }

double ts_max_trend_slope(void) { return kMaxTrendSlope; }

ts_status ts_verify_sup_bounds(ts_pair pair, const ts_estimate_options* options, ts_sup_report** out) {
    return guarded([&] {
        require_out(out);
        IndexRange range;
        const EstimateOptions opt = to_options(options, &range);
        *out = new ts_sup_report{verify_sup_bounds(to_pair(pair), range, opt)};
    });
}

void ts_sup_report_free(ts_sup_report* r) { delete r; }

size_t ts_sup_report_count(const ts_sup_report* r) { return r ? r->report.n_values.size() : 0; }

ts_status ts_sup_report_maxima(const ts_sup_report* r, double* max_value, double* max_derivative) {
    return guarded([&] {
        require(r != nullptr, "report handle is NULL");
        if (max_value) *max_value = r->report.max_value;
        if (max_derivative) *max_derivative = r->report.max_derivative;
    });
}

ts_status ts_sup_report_series(const ts_sup_report* r, int* n_values, double* sup_values, double* sup_derivatives,
                               size_t cap) {
    return guarded([&] {
        require(r != nullptr, "report handle is NULL");
        const SupBoundsReport& x = r->report;
        require_cap(cap, x.n_values.size());
        if (n_values) std::copy(x.n_values.begin(), x.n_values.end(), n_values);
        if (sup_values) std::copy(x.sup_values.begin(), x.sup_values.end(), sup_values);
        if (sup_derivatives) std::copy(x.sup_derivatives.begin(), x.sup_derivatives.end(), sup_derivatives);
    });
}

ts_status ts_sup_bound_constant(double c, double m, int n, double alpha, double* out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = sup_bound_constant(c, m, n, alpha);
    });
}

ts_status ts_disjointness_index(double r, double alpha, int* out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = disjointness_index(r, alpha);
    });
}

ts_status ts_verify_localization(ts_pair pair, double alpha, double r, int first, int last, ts_loc_report** out) {
    return guarded([&] {
        require_out(out);
        *out = new ts_loc_report{verify_localization(to_pair(pair), alpha, r, IndexRange{first, last})};
    });
}

void ts_loc_report_free(ts_loc_report* r) { delete r; }

ts_status ts_loc_report_summary(const ts_loc_report* r, ts_loc_summary* out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "NULL argument");
        const LocalizationReport& x = r->report;
        *out = ts_loc_summary{x.alpha,     x.r,
                              x.disjointness_index, x.minimal_r,
                              x.first_contained,    x.all_in_region ? 1 : 0,
                              x.n_values.size()};
    });
}

ts_status ts_loc_report_series(const ts_loc_report* r, int* n_values, double* eigenvalues, double* distances,
                               double* radii, int* in_own_disk, int* in_region, size_t cap) {
    return guarded([&] {
        require(r != nullptr, "report handle is NULL");
        const LocalizationReport& x = r->report;
        require_cap(cap, x.n_values.size());
        for (size_t i = 0; i < x.n_values.size(); ++i) {
            if (n_values) n_values[i] = x.n_values[i];
            if (eigenvalues) eigenvalues[i] = x.eigenvalues[i];
            if (distances) distances[i] = x.distances[i];
            if (radii) radii[i] = x.radii[i];
            if (in_own_disk) in_own_disk[i] = x.in_own_disk[i] ? 1 : 0;
            if (in_region) in_region[i] = x.in_region[i] ? 1 : 0;
        }
    });
}

ts_status ts_verify_form_identity(ts_pair first, ts_pair second, ts_boundary kind, int n, ts_form_identity* out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        const FormIdentityReport r = verify_form_identity(to_pair(first), to_pair(second), to_kind(kind), n);
        *out = ts_form_identity{r.eigenvalue,      r.lhs,
                                r.rhs,             r.residual,
                                r.subtraction_lhs, r.subtraction_rhs,
                                r.subtraction_residual};
    });
}

/* ---- inverse problem ---- */

ts_solver_config ts_solver_config_default(void) {
    const SolverConfig c;
    return ts_solver_config{c.basis_modes, c.tikhonov, c.damping, c.max_iter,
                            c.tol,         c.forward_N, c.oracle_N, c.max_halvings};
}

ts_status ts_inverse_problem_create(ts_slot unknown, const ts_coeff* known, const double* target_lambda,
                                    const double* target_mu, size_t n_spec, const double anchor[2],
                                    ts_inverse_problem** out) {
    return guarded([&] {
        require_out(out);
        require(known != nullptr, "known coefficient is NULL");
        require(n_spec > 0 && target_lambda != nullptr && target_mu != nullptr, "target spectra are empty");
        InverseProblem p;
        p.unknown = to_slot(unknown);
        p.known = known->value;
        p.target_lambda.assign(target_lambda, target_lambda + n_spec);
        p.target_mu.assign(target_mu, target_mu + n_spec);
        if (anchor) p.anchor = {anchor[0], anchor[1]};
        *out = new ts_inverse_problem{std::move(p)};
    });
}

ts_status ts_inverse_problem_synthetic(const double anchor[2], double epsilon, uint64_t seed, int n_spec,
                                       ts_slot unknown, int oracle_n, int modes, ts_inverse_problem** out,
                                       ts_coeff** truth) {
    return guarded([&] {
        require_out(out);
        if (truth) *truth = nullptr;
        require(anchor != nullptr, "anchor is NULL");
        SyntheticProblem sp =
            generate_synthetic_problem({anchor[0], anchor[1]}, epsilon, seed, n_spec, to_slot(unknown), oracle_n, modes);
        std::unique_ptr<ts_coeff> t(truth ? new ts_coeff{sp.truth} : nullptr);
        *out = new ts_inverse_problem{std::move(sp.problem)};
        if (truth) *truth = t.release();
    });
}

void ts_inverse_problem_free(ts_inverse_problem* p) { delete p; }

size_t ts_inverse_problem_size(const ts_inverse_problem* p) {
    return p ? p->problem.target_lambda.size() : 0;
}

ts_status ts_inverse_problem_targets(const ts_inverse_problem* p, double* lambda, double* mu, size_t cap) {
    return guarded([&] {
        require(p != nullptr, "problem handle is NULL");
        require_cap(cap, p->problem.target_lambda.size());
        if (lambda) std::copy(p->problem.target_lambda.begin(), p->problem.target_lambda.end(), lambda);
        if (mu) std::copy(p->problem.target_mu.begin(), p->problem.target_mu.end(), mu);
    });
}

ts_status ts_recover_unknown(const ts_inverse_problem* p, const ts_solver_config* config, const ts_coeff* truth,
                             ts_reconstruction** out) {
    return guarded([&] {
        require_out(out);
        require(p != nullptr, "problem handle is NULL");
        const ts_solver_config c = config ? *config : ts_solver_config_default();
        SolverConfig sc;
        sc.basis_modes = c.basis_modes;
        sc.tikhonov = c.tikhonov;
        sc.damping = c.damping;
        sc.max_iter = c.max_iter;
        sc.tol = c.tol;
        sc.forward_N = c.forward_n;
        sc.oracle_N = c.oracle_n;
        sc.max_halvings = c.max_halvings;
        *out = new ts_reconstruction{recover_unknown(p->problem, sc, truth ? &truth->value : nullptr)};
    });
}

void ts_reconstruction_free(ts_reconstruction* r) { delete r; }

ts_status ts_reconstruction_summary_get(const ts_reconstruction* r, ts_reconstruction_summary* out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "NULL argument");
        const ReconstructionResult& x = r->result;
        *out = ts_reconstruction_summary{x.iterations,
                                         x.converged ? 1 : 0,
                                         x.threshold,
                                         x.residual_history.empty() ? 0.0 : x.residual_history.back(),
                                         x.final_l2_error_vs_truth ? 1 : 0,
                                         x.final_l2_error_vs_truth.value_or(0.0),
                                         x.residual_history.size()};
    });
}

ts_status ts_reconstruction_history(const ts_reconstruction* r, double* out, size_t cap) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "NULL argument");
        require_cap(cap, r->result.residual_history.size());
        std::copy(r->result.residual_history.begin(), r->result.residual_history.end(), out);
    });
}

ts_status ts_reconstruction_estimate(const ts_reconstruction* r, ts_coeff** out) {
    return guarded([&] {
        require_out(out);
        require(r != nullptr, "reconstruction handle is NULL");
        *out = new ts_coeff{r->result.estimate};
    });
}

ts_status ts_uniqueness_probe(const double anchor[2], double epsilon, int trials, uint64_t seed, ts_slot unknown,
                              int n_spec, int modes, ts_probe_report** out) {
    return guarded([&] {
        require_out(out);
        require(anchor != nullptr, "anchor is NULL");
        ProbeOptions opt;
        opt.unknown = to_slot(unknown);
        opt.n_spec = n_spec;
        opt.modes = modes;
        *out = new ts_probe_report{uniqueness_probe({anchor[0], anchor[1]}, epsilon, trials, seed, opt)};
    });
}

void ts_probe_report_free(ts_probe_report* r) { delete r; }

ts_status ts_probe_report_summary(const ts_probe_report* r, ts_probe_summary* out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "NULL argument");
        const ProbeReport& x = r->report;
        *out = ts_probe_summary{x.unknown == Slot::P ? TS_SLOT_P : TS_SLOT_Q,
                                x.epsilon,
                                x.n_spec,
                                x.seed,
                                x.min_ratio,
                                x.max_ratio,
                                x.consistent ? 1 : 0,
                                x.trials.size()};
    });
}

ts_status ts_probe_report_trials(const ts_probe_report* r, double* spectral_distance, double* coefficient_distance,
                                 double* ratio, size_t cap) {
    return guarded([&] {
        require(r != nullptr, "report handle is NULL");
        const auto& t = r->report.trials;
        require_cap(cap, t.size());
        for (size_t i = 0; i < t.size(); ++i) {
            if (spectral_distance) spectral_distance[i] = t[i].spectral_distance;
            if (coefficient_distance) coefficient_distance[i] = t[i].coefficient_distance;
            if (ratio) ratio[i] = t[i].ratio;
        }
    });
}

ts_status ts_compare_candidates(ts_pair first, ts_pair second, ts_slot unknown, int n_spec,
                                double* spectral_distance, double* coefficient_distance) {
    return guarded([&] {
        const ProbeTrial t = compare_candidates(to_pair(first), to_pair(second), to_slot(unknown), n_spec);
        if (spectral_distance) *spectral_distance = t.spectral_distance;
        if (coefficient_distance) *coefficient_distance = t.coefficient_distance;
    });
}

}  // extern "C"

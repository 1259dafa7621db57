#include "twospec/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "twospec/errors.hpp"

namespace twospec {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

void add_into(std::vector<double>& dst, std::span<const double> src, double s) {
    if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += s * src[i];
}

}  // namespace

CoefficientFunction CoefficientFunction::constant(double value) {
    CoefficientFunction c;
    c.constant_ = value;
    c.validate();
    return c;
}

CoefficientFunction CoefficientFunction::series(double constant_part, std::vector<double> cosine,
                                                std::vector<double> sine) {
    CoefficientFunction c;
    c.constant_ = constant_part;
    c.cos_ = std::move(cosine);
    c.sin_ = std::move(sine);
    c.validate();
    return c;
}

CoefficientFunction CoefficientFunction::from_grid(std::vector<double> samples, int max_modes) {
    const int m = static_cast<int>(samples.size());
    if (m < 2) throw DomainError("grid coefficient needs at least two samples");
    if (!all_finite(samples)) throw DomainError("grid coefficient has non-finite samples");
    if (max_modes < 0) throw DomainError("max_modes must be nonnegative");

    const int modes = std::min(max_modes, (m - 1) / 4);
    const int cols = 1 + 2 * modes;
    const double h = 1.0 / (m - 1);

    Eigen::MatrixXd design(m, cols);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
        const double x = i * h;
        const double w = std::sqrt((i == 0 || i == m - 1) ? 0.5 * h : h);
        design(i, 0) = w;
        for (int k = 1; k <= modes; ++k) {
            design(i, 2 * k - 1) = w * std::cos(2.0 * k * kPi * x);
            design(i, 2 * k) = w * std::sin(2.0 * k * kPi * x);
        }
        rhs(i) = w * samples[i];
    }
    const Eigen::VectorXd sol = design.colPivHouseholderQr().solve(rhs);

    CoefficientFunction c;
    c.constant_ = sol(0);
    c.cos_.resize(modes);
    c.sin_.resize(modes);
    for (int k = 1; k <= modes; ++k) {
        c.cos_[k - 1] = sol(2 * k - 1);
        c.sin_[k - 1] = sol(2 * k);
    }
    c.grid_ = std::move(samples);
    c.validate();
    return c;
}

void CoefficientFunction::validate() const {
    if (!std::isfinite(constant_) || !all_finite(cos_) || !all_finite(sin_))
        throw DomainError("coefficient has non-finite entries");
}

int CoefficientFunction::highest_mode() const noexcept {
    const std::size_t n = std::max(cos_.size(), sin_.size());
    for (std::size_t k = n; k > 0; --k) {
        const double a = k <= cos_.size() ? cos_[k - 1] : 0.0;
        const double b = k <= sin_.size() ? sin_[k - 1] : 0.0;
        if (a != 0.0 || b != 0.0) return static_cast<int>(k);
    }
    return 0;
}

double CoefficientFunction::eval(double x, Eval mode) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("coefficient evaluated outside [0,1]");
    if (mode == Eval::Grid && grid_) {
        const auto& g = *grid_;
        const double t = x * static_cast<double>(g.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(t), g.size() - 2);
        const double f = t - static_cast<double>(i);
        return (1.0 - f) * g[i] + f * g[i + 1];
    }
    double v = constant_;
    for (std::size_t k = 0; k < cos_.size(); ++k) v += cos_[k] * std::cos(2.0 * (k + 1) * kPi * x);
    for (std::size_t k = 0; k < sin_.size(); ++k) v += sin_[k] * std::sin(2.0 * (k + 1) * kPi * x);
    return v;
}

double CoefficientFunction::l2_norm() const noexcept {
    double s = constant_ * constant_;
    for (double a : cos_) s += 0.5 * a * a;
    for (double b : sin_) s += 0.5 * b * b;
    return std::sqrt(s);
}

double CoefficientFunction::projection_residual() const {
    if (!grid_) return 0.0;
    const auto& g = *grid_;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(g.size() - 1);
        worst = std::max(worst, std::abs(eval(x, Eval::Series) - g[i]));
    }
    return worst;
}

double CoefficientFunction::sup_bound() const noexcept {
    double s = std::abs(constant_);
    for (double a : cos_) s += std::abs(a);
    for (double b : sin_) s += std::abs(b);
    return s;
}

CoefficientFunction& CoefficientFunction::operator+=(const CoefficientFunction& other) {
    constant_ += other.constant_;
    add_into(cos_, other.cos_, 1.0);
    add_into(sin_, other.sin_, 1.0);
    grid_.reset();
    return *this;
}

CoefficientFunction& CoefficientFunction::operator-=(const CoefficientFunction& other) {
    constant_ -= other.constant_;
    add_into(cos_, other.cos_, -1.0);
    add_into(sin_, other.sin_, -1.0);
    grid_.reset();
    return *this;
}

CoefficientFunction& CoefficientFunction::operator*=(double s) {
    constant_ *= s;
    for (double& a : cos_) a *= s;
    for (double& b : sin_) b *= s;
    if (grid_)
        for (double& g : *grid_) g *= s;
    return *this;
}

double CoefficientPair::norm() const noexcept {
    return std::hypot(p.l2_norm(), q.l2_norm());
}

int CoefficientPair::highest_mode() const noexcept {
    return std::max(p.highest_mode(), q.highest_mode());
}

bool CoefficientPair::in_ball(double a1, double a2, double eps) const {
    const CoefficientPair d{p - CoefficientFunction::constant(a1), q - CoefficientFunction::constant(a2)};
    return d.norm() < eps;
}

double pair_distance(const CoefficientPair& a, const CoefficientPair& b) {
    return CoefficientPair{a.p - b.p, a.q - b.q}.norm();
}

double unit_uniform(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

CoefficientFunction random_series(std::uint64_t seed, int modes, double norm) {
    if (modes < 0) throw DomainError("modes must be >= 0");
    if (!(norm >= 0.0) || !std::isfinite(norm)) throw DomainError("norm must be finite and >= 0");
    std::mt19937_64 rng(seed);
    const double c0 = 2.0 * unit_uniform(rng()) - 1.0;
    std::vector<double> a(static_cast<std::size_t>(modes)), b(static_cast<std::size_t>(modes));
    for (int k = 1; k <= modes; ++k) {
        a[static_cast<std::size_t>(k - 1)] = (2.0 * unit_uniform(rng()) - 1.0) / k;
        b[static_cast<std::size_t>(k - 1)] = (2.0 * unit_uniform(rng()) - 1.0) / k;
    }
    CoefficientFunction c = CoefficientFunction::series(c0, std::move(a), std::move(b));
    const double raw = c.l2_norm();
    c *= (norm > 0.0 && raw > 0.0) ? norm / raw : 0.0;
    return c;
}

CoefficientPair random_pair(const std::array<double, 2>& center, double radius, int modes, std::uint64_t seed) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw DomainError("radius must be finite and >= 0");
    std::mt19937_64 rng(seed);
    const double dist = radius * (0.5 + 0.4 * unit_uniform(rng()));
    const double angle = 0.5 * kPi * unit_uniform(rng());
    const std::uint64_t sp = rng();
    const std::uint64_t sq = rng();
    return {CoefficientFunction::constant(center[0]) + random_series(sp, modes, dist * std::cos(angle)),
            CoefficientFunction::constant(center[1]) + random_series(sq, modes, dist * std::sin(angle))};
}

CoefficientFunction coefficient_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed coefficient JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("coefficient JSON must be an object");

    auto read_array = [&](const char* key) {
        std::vector<double> out;
        if (!j.contains(key)) return out;
        const auto& a = j.at(key);
        if (!a.is_array()) throw DomainError(std::string("coefficient field '") + key + "' must be an array");
        for (const auto& v : a) {
            if (!v.is_number()) throw DomainError(std::string("coefficient field '") + key + "' must hold numbers");
            out.push_back(v.get<double>());
        }
        return out;
    };

    if (j.contains("grid")) {
        if (j.contains("constant") || j.contains("cos") || j.contains("sin"))
            throw DomainError("coefficient JSON mixes grid and series representations");
        int max_modes = 16;
        for (const auto& item : j.items()) {
            if (item.key() == "max_modes") {
                if (!item.value().is_number_integer()) throw DomainError("coefficient field 'max_modes' must be an integer");
                max_modes = item.value().get<int>();
            } else if (item.key() != "grid") {
                throw DomainError("unknown coefficient field '" + item.key() + "'");
            }
        }
        return CoefficientFunction::from_grid(read_array("grid"), max_modes);
    }
    double c0 = 0.0;
    if (j.contains("constant")) {
        if (!j.at("constant").is_number()) throw DomainError("coefficient field 'constant' must be a number");
        c0 = j.at("constant").get<double>();
    }
    for (const auto& item : j.items()) {
        if (item.key() != "constant" && item.key() != "cos" && item.key() != "sin")
            throw DomainError("unknown coefficient field '" + item.key() + "'");
    }
    return CoefficientFunction::series(c0, read_array("cos"), read_array("sin"));
}

std::string coefficient_to_json(const CoefficientFunction& c) {
    nlohmann::json j;
    j["constant"] = c.constant_part();
    j["cos"] = std::vector<double>(c.cosine_coeffs().begin(), c.cosine_coeffs().end());
    j["sin"] = std::vector<double>(c.sine_coeffs().begin(), c.sine_coeffs().end());
    return j.dump();
}

}  // namespace twospec

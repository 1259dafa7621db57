#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace twospec {

/// A real coefficient on [0,1]:
///   c(x) = c0 + sum_k a_k cos(2k pi x) + b_k sin(2k pi x),   k = 1, 2, ...
/// optionally carrying the uniform-grid samples it was projected from.
class CoefficientFunction {
public:
    enum class Eval { Series, Grid };

    CoefficientFunction() = default;

    static CoefficientFunction constant(double value);
    static CoefficientFunction series(double constant_part, std::vector<double> cosine,
                                      std::vector<double> sine);

    // Samples on the uniform grid x_i = i/(M-1), i = 0..M-1 (endpoints included).
    // The series part is a trapezoid-weighted least-squares projection onto
    // modes k <= max_modes (capped by the grid resolution).
    static CoefficientFunction from_grid(std::vector<double> samples, int max_modes = 16);

    double constant_part() const noexcept { return constant_; }
    std::span<const double> cosine_coeffs() const noexcept { return cos_; }
    std::span<const double> sine_coeffs() const noexcept { return sin_; }
    const std::optional<std::vector<double>>& grid_samples() const noexcept { return grid_; }

    // Highest trigonometric mode index carrying a nonzero coefficient (0 for constants).
    int highest_mode() const noexcept;
    bool is_constant() const noexcept { return highest_mode() == 0; }

    double operator()(double x) const { return eval(x, Eval::Series); }
    double eval(double x, Eval mode) const;

    double l2_norm() const noexcept;

    // Largest deviation between the stored grid samples and the series at the
    // grid nodes; zero when no samples are stored.
    double projection_residual() const;

    // Upper bound on sup |c(x)| from the coefficient magnitudes.
    double sup_bound() const noexcept;

    CoefficientFunction& operator+=(const CoefficientFunction& other);
    CoefficientFunction& operator-=(const CoefficientFunction& other);
    CoefficientFunction& operator*=(double s);

    friend CoefficientFunction operator+(CoefficientFunction a, const CoefficientFunction& b) { return a += b; }
    friend CoefficientFunction operator-(CoefficientFunction a, const CoefficientFunction& b) { return a -= b; }
    friend CoefficientFunction operator*(double s, CoefficientFunction a) { return a *= s; }

    friend bool operator==(const CoefficientFunction&, const CoefficientFunction&) = default;

private:
    void validate() const;

    double constant_ = 0.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
    std::optional<std::vector<double>> grid_;
};

/// The pair p = (p, q) of shear and potential coefficients.
struct CoefficientPair {
    CoefficientFunction p;
    CoefficientFunction q;

    static CoefficientPair constants(double a1, double a2) {
        return {CoefficientFunction::constant(a1), CoefficientFunction::constant(a2)};
    }

    double norm() const noexcept;
    int highest_mode() const noexcept;
    bool is_constant() const noexcept { return p.is_constant() && q.is_constant(); }

    // Membership in the open ball B(a, eps) around a constant pair a.
    bool in_ball(double a1, double a2, double eps) const;

    friend bool operator==(const CoefficientPair&, const CoefficientPair&) = default;
};

double pair_distance(const CoefficientPair& a, const CoefficientPair& b);

// Uniform double in [0,1) from the top 53 bits of one draw; identical on every platform.
double unit_uniform(std::uint64_t bits) noexcept;

// Seeded series c0 + sum_{k<=modes} a_k cos + b_k sin with raw coefficients
// uniform in [-1/k, 1/k], rescaled to the given L2 norm.
CoefficientFunction random_series(std::uint64_t seed, int modes, double norm);

// Seeded pair in the open ball B(center, radius): distance from the center
// drawn in [0.5, 0.9) radius and split between p and q by a random angle.
CoefficientPair random_pair(const std::array<double, 2>& center, double radius, int modes, std::uint64_t seed);

// JSON schema: {"constant": c0, "cos": [...], "sin": [...]} or
// {"grid": [...], "max_modes": k} (max_modes optional, default 16).
CoefficientFunction coefficient_from_json(const std::string& text);
std::string coefficient_to_json(const CoefficientFunction& c);

}  // namespace twospec

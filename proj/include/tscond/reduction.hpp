// Vertical-averaging reduction of the 3D slab transport to effective 2D
// coefficients: the shape-function integrals lambda_1, lambda_2, the scaled
// coefficients derived from them, and the power-law conductivity.
#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "tscond/common.hpp"

namespace tscond {

struct ReductionSpec {
    double S = 0.05;       // panel/air-gap pitch
    double beta_exp = 0.0; // conductivity exponent
    std::function<double(double)> Z;  // temperature shape, Z(0) = 1
    std::function<double(double)> B;  // velocity shape

    static ReductionSpec uniform(double S, double beta_exp = 0.0) {
        ReductionSpec s;
        s.S = S;
        s.beta_exp = beta_exp;
        s.Z = [](double) { return 1.0; };
        s.B = [](double) { return 1.0; };
        return s;
    }
};

struct ReductionCoefficients {
    double lambda1 = 0.0;  // integral of Z^{beta+1} over [0, S/2]
    double lambda2 = 0.0;  // integral of Z B over [0, S/2]
};

namespace detail {

// Composite 5-point Gauss-Legendre quadrature on [0, half].
inline double integrate(const std::function<double(double)>& f, double half, int panels) {
    static const double xi[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double wi[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    const double h = half / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (int q = 0; q < 5; ++q) {
            const double v = f(mid + 0.5 * h * xi[q]);
            if (!std::isfinite(v)) throw numerical_error("reduction: non-finite shape evaluation");
            sum += 0.5 * h * wi[q] * v;
        }
    }
    return sum;
}

}  // namespace detail

inline ReductionCoefficients reduction_coefficients(const ReductionSpec& spec,
                                                    int quadrature_panels = 16) {
    ensure(spec.S > 0.0, "reduction_coefficients: pitch must be > 0");
    ensure(quadrature_panels >= 1, "reduction_coefficients: need at least one panel");
    ensure(static_cast<bool>(spec.Z) && static_cast<bool>(spec.B),
           "reduction_coefficients: shape functions not set");
    ensure(std::abs(spec.Z(0.0) - 1.0) <= 1e-12,
           "reduction_coefficients: temperature shape must satisfy Z(0) = 1");
    const double half = 0.5 * spec.S;
    ReductionCoefficients c;
    c.lambda1 = detail::integrate(
        [&](double z) { return std::pow(spec.Z(z), spec.beta_exp + 1.0); }, half,
        quadrature_panels);
    c.lambda2 =
        detail::integrate([&](double z) { return spec.Z(z) * spec.B(z); }, half, quadrature_panels);
    ensure(c.lambda1 > 0.0 && c.lambda2 > 0.0,
           "reduction_coefficients: shape integrals must be positive");
    return c;
}

struct EffectiveCoefficients {
    double h_hat = 0.0;  // h / lambda1
    double v_hat = 0.0;  // (lambda2 / lambda1) V
};

inline EffectiveCoefficients effective_coefficients(double lambda1, double lambda2, double h,
                                                    double V) {
    if (!(lambda1 > 0.0))
        throw std::domain_error("effective_coefficients: lambda1 must be > 0");
    return {h / lambda1, lambda2 / lambda1 * V};
}

// k(T) = k0 (T/u0)^beta
inline double power_law_conductivity(double k0, double u0, double beta_exp, double T) {
    if (!(T > 0.0)) throw std::domain_error("power_law_conductivity: temperature must be > 0");
    if (!(u0 > 0.0)) throw std::domain_error("power_law_conductivity: reference must be > 0");
    return k0 * std::pow(T / u0, beta_exp);
}

// Named shape presets selectable from config.
//   constant:  Z = B = 1
//   linear:    Z = 1 - 2z/S (cold mid-plane), B = 1
//   parabolic: Z = 1, B = parabolic channel profile peaking at the mid-plane
inline ReductionSpec shape_preset(const std::string& name, double S, double beta_exp) {
    ReductionSpec s = ReductionSpec::uniform(S, beta_exp);
    if (name == "constant") return s;
    if (name == "linear") {
        s.Z = [S](double z) { return 1.0 - 2.0 * z / S; };
        return s;
    }
    if (name == "parabolic") {
        s.B = [S](double z) {
            const double t = 2.0 * z / S;
            return 1.5 * (1.0 - (1.0 - t) * (1.0 - t));
        };
        return s;
    }
    throw config_error("shape_preset: unknown preset '" + name + "'");
}

}  // namespace tscond

// Homogeneous two-phase closures: saturation property curves loaded from a
// table, quality-weighted mixture laws, saturated-state inversion, and the
// friction / condensation heat-transfer correlations.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tscond/common.hpp"

namespace tscond {

// Saturation curves of a pure fluid over [T_min, T_max], linearly
// interpolated between table rows. Rows hold
//   T  rho_L  rho_V  H_L  H_V  p_sat  mu_L  mu_V
// in SI units, temperature strictly increasing.
class SaturationModel {
  public:
    static SaturationModel from_file(const std::string& path) {
        std::ifstream in(path);
        ensure(in.good(), "SaturationModel: cannot open property file " + path);
        SaturationModel m;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream row(line);
            Row r;
            if (row >> r.T >> r.rho_L >> r.rho_V >> r.H_L >> r.H_V >> r.p_sat >> r.mu_L >> r.mu_V)
                m.rows_.push_back(r);
        }
        m.validate(path);
        return m;
    }

    static SaturationModel from_rows(std::vector<std::array<double, 8>> data) {
        SaturationModel m;
        for (const auto& d : data)
            m.rows_.push_back(Row{d[0], d[1], d[2], d[3], d[4], d[5], d[6], d[7]});
        m.validate("<inline>");
        return m;
    }

    double T_min() const { return rows_.front().T; }
    double T_max() const { return rows_.back().T; }

    double rho_L(double T) const { return interp(T, &Row::rho_L); }
    double rho_V(double T) const { return interp(T, &Row::rho_V); }
    double H_L(double T) const { return interp(T, &Row::H_L); }
    double H_V(double T) const { return interp(T, &Row::H_V); }
    double p_sat(double T) const { return interp(T, &Row::p_sat); }
    double mu_L(double T) const { return interp(T, &Row::mu_L); }
    double mu_V(double T) const { return interp(T, &Row::mu_V); }

    // Inverse of the (strictly increasing, piecewise-linear) p_sat curve.
    double T_sat(double p) const {
        ensure(p >= rows_.front().p_sat && p <= rows_.back().p_sat,
               "SaturationModel: pressure outside the saturation table");
        std::size_t lo = 0, hi = rows_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (rows_[mid].p_sat <= p ? lo : hi) = mid;
        }
        const Row& a = rows_[lo];
        const Row& b = rows_[hi];
        const double w = (p - a.p_sat) / (b.p_sat - a.p_sat);
        return a.T + w * (b.T - a.T);
    }

    // Inverses of the (increasing) phase enthalpy curves, clamped to the
    // validity interval.
    double T_from_H_L(double H) const { return invert_curve(&Row::H_L, H); }
    double T_from_H_V(double H) const { return invert_curve(&Row::H_V, H); }

  private:
    struct Row {
        double T, rho_L, rho_V, H_L, H_V, p_sat, mu_L, mu_V;
    };
    std::vector<Row> rows_;

    void check_range(double T) const {
        ensure(T >= T_min() && T <= T_max(),
               "SaturationModel: temperature outside the validity interval");
    }

    double interp(double T, double Row::* field) const {
        check_range(T);
        std::size_t lo = 0, hi = rows_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (rows_[mid].T <= T ? lo : hi) = mid;
        }
        const Row& a = rows_[lo];
        const Row& b = rows_[hi];
        const double w = (T - a.T) / (b.T - a.T);
        return a.*field + w * (b.*field - a.*field);
    }

    double invert_curve(double Row::* field, double target) const {
        double lo = T_min(), hi = T_max();
        if (target <= interp(lo, field)) return lo;
        if (target >= interp(hi, field)) return hi;
        for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (interp(mid, field) <= target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    void validate(const std::string& origin) const {
        ensure(rows_.size() >= 2, "SaturationModel: need at least two table rows in " + origin);
        for (std::size_t i = 1; i < rows_.size(); ++i)
            ensure(rows_[i].T > rows_[i - 1].T,
                   "SaturationModel: temperatures must be strictly increasing in " + origin);
        // Physical sanity, checked densely rather than only at the knots.
        const int samples = 1000;
        for (int i = 0; i <= samples; ++i) {
            const double T = T_min() + (T_max() - T_min()) * i / samples;
            const double rL = rho_L(T), rV = rho_V(T);
            ensure(rL > rV && rV > 0.0, "SaturationModel: need rho_L > rho_V > 0 in " + origin);
            ensure(H_V(T) > H_L(T), "SaturationModel: latent heat must be positive in " + origin);
            ensure(mu_L(T) > 0.0 && mu_V(T) > 0.0,
                   "SaturationModel: viscosities must be positive in " + origin);
            if (i > 0) {
                const double Tp = T_min() + (T_max() - T_min()) * (i - 1) / samples;
                ensure(p_sat(T) > p_sat(Tp),
                       "SaturationModel: p_sat must be strictly increasing in " + origin);
            }
        }
    }
};

// Homogeneous-model mixture density: harmonic blend of the phase densities.
inline double mixture_density(double T, double x, const SaturationModel& sat) {
    ensure(x >= 0.0 && x <= 1.0, "mixture_density: quality must lie in [0, 1]");
    const double rL = sat.rho_L(T);
    const double rV = sat.rho_V(T);
    return rV * rL / (rV * (1.0 - x) + rL * x);
}

inline double mixture_enthalpy(double T, double x, const SaturationModel& sat) {
    ensure(x >= 0.0 && x <= 1.0, "mixture_enthalpy: quality must lie in [0, 1]");
    return (1.0 - x) * sat.H_L(T) + x * sat.H_V(T);
}

// McAdams homogeneous viscosity: 1/mu = x/mu_V + (1-x)/mu_L.
inline double mixture_viscosity(double T, double x, const SaturationModel& sat) {
    ensure(x >= 0.0 && x <= 1.0, "mixture_viscosity: quality must lie in [0, 1]");
    return 1.0 / (x / sat.mu_V(T) + (1.0 - x) / sat.mu_L(T));
}

struct InvertedState {
    double T = 0.0;
    double x = 0.0;
    double rho = 0.0;
    double p = 0.0;
    bool subcooled = false;    // enthalpy below the liquid curve, x clamped to 0
    bool superheated = false;  // enthalpy above the vapor curve, x clamped to 1
    double p_discrepancy = 0.0;  // |p_hint - p_sat(T)| when a pressure hint was given
};

// Saturated-state inversion of (H, p or T) -> (T, x, rho, p). Temperature is
// the primary saturation variable: with a pressure hint, T = T_sat(p_hint);
// the deviation of the hint from the resulting saturation pressure is
// reported, not enforced. Quality follows from the enthalpy blend and is
// clamped to [0, 1] with flags.
inline InvertedState invert_state_at_T(double H, double T, const SaturationModel& sat) {
    InvertedState s;
    s.T = T;
    const double hL = sat.H_L(T);
    const double hV = sat.H_V(T);
    s.x = (H - hL) / (hV - hL);
    if (s.x < 0.0) {
        s.x = 0.0;
        s.subcooled = true;
    } else if (s.x > 1.0) {
        s.x = 1.0;
        s.superheated = true;
    }
    s.rho = mixture_density(T, s.x, sat);
    s.p = sat.p_sat(T);
    return s;
}

// Pressure-hint inversion. Outside the saturated band the temperature comes
// from the appropriate single-phase enthalpy curve instead of the saturation
// line, so a fully condensed stream cools below T_sat as it keeps losing heat.
inline InvertedState invert_state_at_p(double H, double p_hint, const SaturationModel& sat) {
    InvertedState s = invert_state_at_T(H, sat.T_sat(p_hint), sat);
    s.p_discrepancy = std::abs(p_hint - s.p);
    if (s.subcooled) {
        s.T = sat.T_from_H_L(H);
        s.rho = sat.rho_L(s.T);
        s.p = p_hint;
    } else if (s.superheated) {
        s.T = sat.T_from_H_V(H);
        s.rho = sat.rho_V(s.T);
        s.p = p_hint;
    }
    return s;
}

// Darcy-type distributed flow resistance from the Blasius smooth-pipe
// friction factor, f = 0.3164 Re^{-1/4}. Written so that the pressure
// gradient is R G with R = f |G| / (2 D_h rho).
inline double blasius_resistance(double G, double rho, double mu, double D_h) {
    ensure(D_h > 0.0, "blasius_resistance: hydraulic diameter must be > 0");
    ensure(mu > 0.0, "blasius_resistance: viscosity must be > 0");
    ensure(rho > 0.0, "blasius_resistance: density must be > 0");
    if (G == 0.0) return 0.0;
    const double Re = std::abs(G) * D_h / mu;
    const double f = 0.3164 * std::pow(Re, -0.25);
    return f * std::abs(G) / (2.0 * D_h * rho);
}

// Laminar Hagen-Poiseuille resistance, used as a floor so the momentum
// problem stays nondegenerate as G -> 0.
inline double laminar_resistance(double rho, double mu, double D_h) {
    ensure(D_h > 0.0 && mu > 0.0 && rho > 0.0, "laminar_resistance: invalid arguments");
    return 32.0 * mu / (rho * D_h * D_h);
}

// Shah in-tube condensation correlation (baseline form):
//   h = h_L [ (1-x)^0.8 + 3.8 x^0.76 (1-x)^0.04 / p_r^0.38 ].
// Degenerates to h_L at x=0 and to 0 at x=1 (all-vapor, no liquid film);
// callers should floor the all-vapor limit at a single-phase vapor value.
inline double shah_baseline_h(double h_L, double x, double p_reduced) {
    ensure(x >= 0.0 && x <= 1.0, "shah_baseline_h: quality must lie in [0, 1]");
    if (!(p_reduced > 0.0 && p_reduced < 1.0))
        throw std::domain_error("shah_baseline_h: reduced pressure must lie in (0, 1)");
    return h_L * (std::pow(1.0 - x, 0.8) +
                  3.8 * std::pow(x, 0.76) * std::pow(1.0 - x, 0.04) / std::pow(p_reduced, 0.38));
}

// Correlation choices of a run. Constant variants are the shipped defaults.
struct CorrelationSet {
    enum class HeatTransfer { Constant, ShahBaseline };
    enum class Friction { Blasius };
    enum class AirVelocity { Constant, NaturalConvection };

    HeatTransfer heat_transfer = HeatTransfer::Constant;
    double h_wc_constant = 3.0;
    double shah_h_L = 100.0;          // single-phase liquid coefficient feeding Shah
    double critical_pressure = 3.651e6;

    Friction friction = Friction::Blasius;

    AirVelocity air_velocity = AirVelocity::Constant;
    double air_speed_constant = 1.0;
    // Standard buoyant-channel estimate v ~ sqrt(g b dT) with the plate
    // spacing b; a documented stand-in for the cited design correlation.
    double channel_spacing = 0.05;

    double wall_coolant_h(double x, double p) const {
        switch (heat_transfer) {
            case HeatTransfer::Constant:
                return h_wc_constant;
            case HeatTransfer::ShahBaseline: {
                const double pr = p / critical_pressure;
                const double h = shah_baseline_h(shah_h_L, x, pr);
                return std::max(h, 0.05 * shah_h_L);  // all-vapor floor
            }
        }
        throw std::domain_error("CorrelationSet: unknown heat-transfer model");
    }

    double air_speed(double T_wall, double T_air) const {
        switch (air_velocity) {
            case AirVelocity::Constant:
                return air_speed_constant;
            case AirVelocity::NaturalConvection: {
                const double dT = std::max(T_wall - T_air, 0.0);
                return std::sqrt(9.81 * channel_spacing * dT / std::max(T_air, 1.0));
            }
        }
        throw std::domain_error("CorrelationSet: unknown air-velocity model");
    }
};

}  // namespace tscond

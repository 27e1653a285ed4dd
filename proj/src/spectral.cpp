#include "dephasim/spectral.hpp"
#include "dephasim/special_functions.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace dephasim {

double cutoff_value(CutoffKind kind, double x) {
    if (!(x >= 0.0)) throw std::domain_error("cutoff_value: requires x >= 0");
    return kind == CutoffKind::Soft ? std::exp(-x) : std::exp(-x * x);
}

double spectral_density(const SpectralParams& p, double x) {
    p.validate();
    if (!(x >= 0.0)) throw std::domain_error("spectral_density: requires x >= 0");
    if (x == 0.0) return 0.0;  // s > 0
    return std::pow(x, p.s) * cutoff_value(p.cutoff, x);
}

double g_function(const SpectralParams& p, const TemperatureSpec& t, double x) {
    p.validate();
    if (!(x > 0.0)) throw std::domain_error("g_function: requires x > 0");
    const double f = cutoff_value(p.cutoff, x);
    switch (t.kind()) {
        case TemperatureSpec::Kind::Zero:
            return std::pow(x, p.s - 2.0) * f;
        case TemperatureSpec::Kind::HighTLimit:
            return t.t_tilde() * std::pow(x, p.s - 3.0) * f;
        default:
            return std::pow(x, p.s - 2.0) * f * sf::coth_stable(x / t.t_tilde());
    }
}

double g_origin_order(const SpectralParams& p, const TemperatureSpec& t) {
    return t.kind() == TemperatureSpec::Kind::Zero ? p.s - 2.0 : p.s - 3.0;
}

OriginClass origin_class(const SpectralParams& p, const TemperatureSpec& t) {
    p.validate();
    // x * g(x) ~ x^(s-1) at zero T, ~ t_tilde x^(s-2) otherwise; cutoff irrelevant.
    const double boundary = t.kind() == TemperatureSpec::Kind::Zero ? 1.0 : 2.0;
    if (p.s < boundary) return OriginClass::Diverges;
    if (p.s == boundary) return OriginClass::FiniteNonzero;
    return OriginClass::Vanishes;
}

Convexity convexity_check(const SpectralParams& p, const TemperatureSpec& t,
                          double x_max, int n) {
    p.validate();
    if (!(x_max > 0.0)) throw std::domain_error("convexity_check: x_max must be > 0");
    if (n < 64) throw std::domain_error("convexity_check: n must be >= 64");

    const double x_floor = 1e-4;
    const double ratio = std::pow(x_max / x_floor, 1.0 / (n - 1));
    std::vector<double> x(n), g(n);
    for (int i = 0; i < n; ++i) {
        x[i] = x_floor * std::pow(ratio, i);
        g[i] = g_function(p, t, x[i]);
        if (!std::isfinite(g[i]))
            throw std::runtime_error("convexity_check: g not finite on grid");
    }

    // central second difference on the non-uniform grid
    int sign_seen = 0;
    for (int i = 1; i + 1 < n; ++i) {
        const double hl = x[i] - x[i - 1];
        const double hr = x[i + 1] - x[i];
        const double d2 = 2.0 * (hl * g[i + 1] - (hl + hr) * g[i] + hr * g[i - 1])
                          / (hl * hr * (hl + hr));
        const double scale = (std::abs(g[i - 1]) + std::abs(g[i]) + std::abs(g[i + 1]))
                             / (hl * hr);
        const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale;
        if (std::abs(d2) <= floor) continue;
        const int sgn = d2 > 0.0 ? 1 : -1;
        if (sign_seen == 0) sign_seen = sgn;
        else if (sgn != sign_seen) return Convexity::NonConvex;
    }
    return Convexity::Convex;
}

double tail_cut_for(const SpectralParams& p, const TemperatureSpec& t, double abs_tol) {
    p.validate();
    if (!(abs_tol > 0.0)) throw std::domain_error("tail_cut_for: abs_tol must be > 0");
    const double amp = t.kind() == TemperatureSpec::Kind::Zero
                           ? 1.0
                           : std::max(1.0, t.t_tilde());
    const double target = std::log(amp / abs_tol);
    // envelopes are at most x^a f(x) with a <= s; solve x^a f(x) = abs_tol
    const double a = std::max(p.s, 1.0);
    double x = std::max(target, 4.0);
    for (int i = 0; i < 4; ++i) {
        if (p.cutoff == CutoffKind::Soft)
            x = target + a * std::log(std::max(x, 2.0));
        else
            x = std::sqrt(target + a * std::log(std::max(x, 2.0)));
    }
    return 1.25 * x;
}

} // namespace dephasim

#include "dephasim/dynamics.hpp"
#include "dephasim/special_functions.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dephasim {

namespace {

Integrand g_envelope(const SpectralParams& p, const TemperatureSpec& t) {
    return [p, t](double x) { return g_function(p, t, x); };
}

Integrand rate_envelope(const SpectralParams& p, const TemperatureSpec& t) {
    return [p, t](double x) { return x * g_function(p, t, x); };
}

} // namespace

QuadratureConfig resolve_config(const SpectralParams& p, const TemperatureSpec& t,
                                const QuadratureConfig& cfg) {
    QuadratureConfig out = cfg;
    if (out.tail_cut <= 0.0) out.tail_cut = tail_cut_for(p, t, out.abs_tol);
    if (!out.origin_order) out.origin_order = g_origin_order(p, t);
    return out;
}

double dephasing_factor(const SpectralParams& p, const TemperatureSpec& t,
                        double tau, const QuadratureConfig& cfg) {
    p.validate();
    if (!(tau >= 0.0)) throw std::domain_error("dephasing_factor: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    const QuadratureConfig rc = resolve_config(p, t, cfg);
    const IntegralResult r =
        integrate_oscillatory(g_envelope(p, t), OscMode::CosComplement, tau, rc);
    return 2.0 * r.value;
}

IntegralResult dephasing_rate_full(const SpectralParams& p, const TemperatureSpec& t,
                                   double tau, const QuadratureConfig& cfg) {
    p.validate();
    if (!(tau >= 0.0)) throw std::domain_error("dephasing_rate: tau must be >= 0");
    if (tau == 0.0) return {0.0, 0.0, 0};
    QuadratureConfig rc = resolve_config(p, t, cfg);
    rc.origin_order = *rc.origin_order + 1.0;  // envelope is x * g
    IntegralResult r = integrate_oscillatory(rate_envelope(p, t), OscMode::Sin, tau, rc);
    r.value *= 2.0;
    r.error_estimate *= 2.0;
    return r;
}

double dephasing_rate(const SpectralParams& p, const TemperatureSpec& t,
                      double tau, const QuadratureConfig& cfg) {
    return dephasing_rate_full(p, t, tau, cfg).value;
}

DephasingTrace compute_trace(const SpectralParams& p, const TemperatureSpec& t,
                             const TimeGrid& grid, const QuadratureConfig& cfg,
                             Execution exec) {
    grid.validate();
    const int n = static_cast<int>(grid.tau.size());
    DephasingTrace trace;
    trace.grid = grid;
    trace.lambda.resize(n);
    trace.gamma.resize(n);

    bool failed = false;
    std::string failure;

    auto point = [&](int i) {
        trace.lambda[i] = dephasing_factor(p, t, grid.tau[i], cfg);
        trace.gamma[i] = dephasing_rate(p, t, grid.tau[i], cfg);
    };

    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            if (failed) continue;
            try {
                point(i);
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed = true;
                    failure = e.what();
                }
            }
        }
    } else {
        for (int i = 0; i < n; ++i) point(i);
    }
    if (failed)
        throw QuadratureError(QuadratureError::Kind::NonConvergent,
                              "compute_trace: " + failure);
    return trace;
}

std::vector<double> coherence_evolution(double initial_offdiag_magnitude,
                                        const DephasingTrace& trace) {
    if (!(initial_offdiag_magnitude >= 0.0) || initial_offdiag_magnitude > 0.5)
        throw std::domain_error("coherence_evolution: magnitude must be in [0, 0.5]");
    std::vector<double> out(trace.lambda.size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = initial_offdiag_magnitude * std::exp(-trace.lambda[i]);
    return out;
}

double stationary_lambda(const SpectralParams& p, const TemperatureSpec& t,
                         const QuadratureConfig& cfg) {
    p.validate();
    if (origin_class(p, t) != OriginClass::Vanishes)
        throw std::domain_error("stationary_lambda: Lambda diverges for these parameters");
    const bool soft = p.cutoff == CutoffKind::Soft;
    switch (t.kind()) {
        case TemperatureSpec::Kind::Zero:
            return soft ? 2.0 * sf::gamma_fn(p.s - 1.0)
                        : sf::gamma_fn(0.5 * (p.s - 1.0));
        case TemperatureSpec::Kind::HighTLimit:
            return soft ? 2.0 * t.t_tilde() * sf::gamma_fn(p.s - 2.0)
                        : t.t_tilde() * sf::gamma_fn(0.5 * p.s - 1.0);
        default: {
            const QuadratureConfig rc = resolve_config(p, t, cfg);
            return 2.0 * integrate_smooth(g_envelope(p, t), rc).value;
        }
    }
}

StationaryCoherence stationary_coherence(const SpectralParams& p,
                                         const TemperatureSpec& t,
                                         const QuadratureConfig& cfg) {
    p.validate();
    if (origin_class(p, t) != OriginClass::Vanishes) return {};
    return {std::exp(-stationary_lambda(p, t, cfg))};
}

} // namespace dephasim

#ifndef DEPHASIM_DYNAMICS_HPP
#define DEPHASIM_DYNAMICS_HPP

#include <optional>
#include <vector>

#include "dephasim/quadrature.hpp"
#include "dephasim/spectral.hpp"

namespace dephasim {

/// Serial path is the reference implementation; Parallel uses OpenMP over
/// independent grid points and produces bitwise-identical output.
enum class Execution { Serial, Parallel };

struct TimeGrid {
    std::vector<double> tau;

    void validate() const {
        if (tau.empty()) throw std::domain_error("TimeGrid: empty grid");
        if (tau.front() < 0.0) throw std::domain_error("TimeGrid: times must be >= 0");
        for (size_t i = 1; i < tau.size(); ++i)
            if (!(tau[i] > tau[i - 1]))
                throw std::domain_error("TimeGrid: times must be strictly increasing");
    }

    static TimeGrid uniform(double tau_max, int points) {
        if (!(tau_max > 0.0) || points < 1)
            throw std::domain_error("TimeGrid: bad uniform grid request");
        TimeGrid g;
        g.tau.resize(points + 1);
        for (int i = 0; i <= points; ++i) g.tau[i] = tau_max * i / points;
        return g;
    }
};

struct DephasingTrace {
    TimeGrid grid;
    std::vector<double> lambda;  // decoherence factor, >= 0, lambda[0] = 0 at tau = 0
    std::vector<double> gamma;   // dephasing rate dLambda/dtau, signed
};

struct StationaryCoherence {
    /// Engaged with e^{-Lambda(inf)} when the coherence is trapped; empty when
    /// Lambda diverges and all coherence is lost.
    std::optional<double> trapped;
    bool vanishing() const { return !trapped.has_value(); }
};

/// Lambda(tau) = 2 * integral of g(x) [1 - cos(x tau)].
double dephasing_factor(const SpectralParams& p, const TemperatureSpec& t,
                        double tau, const QuadratureConfig& cfg);

/// gamma(tau) = dLambda/dtau = 2 * integral of x g(x) sin(x tau).
double dephasing_rate(const SpectralParams& p, const TemperatureSpec& t,
                      double tau, const QuadratureConfig& cfg);

/// Like dephasing_rate but also reports the quadrature error estimate,
/// used as the noise floor for sign decisions.
IntegralResult dephasing_rate_full(const SpectralParams& p, const TemperatureSpec& t,
                                   double tau, const QuadratureConfig& cfg);

DephasingTrace compute_trace(const SpectralParams& p, const TemperatureSpec& t,
                             const TimeGrid& grid, const QuadratureConfig& cfg,
                             Execution exec = Execution::Parallel);

/// Off-diagonal magnitude decay e^{-Lambda} * initial; initial must be in [0, 0.5].
std::vector<double> coherence_evolution(double initial_offdiag_magnitude,
                                        const DephasingTrace& trace);

/// Asymptotic decoherence factor Lambda(inf). Closed Gamma-function forms at
/// zero T and in the high-T limit; quadrature for finite t_tilde (s > 2).
/// Throws std::domain_error when the coherence is not trapped.
double stationary_lambda(const SpectralParams& p, const TemperatureSpec& t,
                         const QuadratureConfig& cfg);

StationaryCoherence stationary_coherence(const SpectralParams& p,
                                         const TemperatureSpec& t,
                                         const QuadratureConfig& cfg);

/// Quadrature config with tail_cut and origin_order resolved for (p, t).
QuadratureConfig resolve_config(const SpectralParams& p, const TemperatureSpec& t,
                                const QuadratureConfig& cfg);

} // namespace dephasim

#endif

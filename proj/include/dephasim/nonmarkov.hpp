#ifndef DEPHASIM_NONMARKOV_HPP
#define DEPHASIM_NONMARKOV_HPP

#include <vector>

#include "dephasim/dynamics.hpp"

namespace dephasim {

struct BackflowInterval {
    double begin = 0.0;
    double end = 0.0;
    /// Set when gamma is still negative at tau_max and the interval was
    /// closed there rather than at a detected root.
    bool truncated = false;
};

struct BackflowReport {
    std::vector<BackflowInterval> intervals;
    double n_q = 0.0;
};

/// Binary Shannon entropy, base-2 logarithm, with 0 log 0 = 0.
double binary_entropy(double prob);

/// Q = 1 - H2((1 + e^{-Lambda}) / 2); strictly decreasing in Lambda.
double channel_capacity(double lambda_value);

/// Maximal intervals of (0, tau_max] where gamma < 0, i.e. where the channel
/// capacity increases. Roots of gamma are refined to absolute tolerance 1e-6.
std::vector<BackflowInterval> find_backflow_intervals(
    const SpectralParams& p, const TemperatureSpec& t, double tau_max,
    const QuadratureConfig& cfg, Execution exec = Execution::Parallel);

/// Capacity regained over all back-flow intervals: sum of Q(b_i) - Q(a_i).
BackflowReport nonmarkovianity_measure(const SpectralParams& p,
                                       const TemperatureSpec& t, double tau_max,
                                       const QuadratureConfig& cfg,
                                       Execution exec = Execution::Parallel);

/// Ohmicity s* separating monotone dephasing from dynamics with recoherence,
/// found by bisection on "any back-flow interval exists up to tau_max = 200"
/// over the bracket (1, 6]; absolute tolerance 0.01.
double markovian_crossover(const TemperatureSpec& t, CutoffKind cutoff,
                           const QuadratureConfig& cfg);

} // namespace dephasim

#endif

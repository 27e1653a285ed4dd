#ifndef DEPHASIM_OPTIMIZER_HPP
#define DEPHASIM_OPTIMIZER_HPP

#include <map>
#include <string>
#include <vector>

#include "dephasim/nonmarkov.hpp"

namespace dephasim {

struct Optimum {
    double s_opt = 0.0;
    double coherence_at_opt = 0.0;
};

struct SweepColumn {
    std::string name;
    std::vector<double> values;
};

struct SweepResult {
    std::string axis_name;
    std::vector<double> axis;
    std::vector<SweepColumn> columns;
    std::map<std::string, std::string> metadata;

    const SweepColumn& column(const std::string& name) const;
};

/// Golden-section minimizer on [a, b]; assumes unimodality.
double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol);

/// Ohmicity maximizing the stationary coherence (minimizing Lambda(inf)).
/// Search bracket [1.05, 6] at zero T, [2.05, 6] otherwise.
Optimum optimal_s(CutoffKind cutoff, const TemperatureSpec& t,
                  const QuadratureConfig& cfg);

/// s_opt and coherence-at-optimum per finite t_tilde; axis is t_tilde.
SweepResult temperature_sweep(CutoffKind cutoff,
                              const std::vector<double>& t_tilde_grid,
                              const QuadratureConfig& cfg,
                              Execution exec = Execution::Parallel);

/// Stationary coherence (0 when vanishing) and back-flow measure per
/// Ohmicity value and cutoff, plus max-normalized copies of each column.
SweepResult ohmicity_sweep(const std::vector<double>& s_grid,
                           const TemperatureSpec& t, double tau_max,
                           const QuadratureConfig& cfg,
                           Execution exec = Execution::Parallel);

} // namespace dephasim

#endif

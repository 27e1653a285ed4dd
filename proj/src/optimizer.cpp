#include "dephasim/optimizer.hpp"

#include <cmath>
#include <sstream>

namespace dephasim {

namespace {

constexpr double kGoldenRatio = 0.6180339887498948482;

double lambda_inf_of_s(double s, CutoffKind cutoff, const TemperatureSpec& t,
                       const QuadratureConfig& cfg) {
    return stationary_lambda(SpectralParams{s, 1.0, cutoff}, t, cfg);
}

void normalize_copy(SweepResult& sweep, const SweepColumn& col) {
    double peak = 0.0;
    for (double v : col.values) peak = std::max(peak, v);
    SweepColumn norm{col.name + "_norm", col.values};
    if (peak > 0.0)
        for (double& v : norm.values) v /= peak;
    sweep.columns.push_back(std::move(norm));
}

} // namespace

const SweepColumn& SweepResult::column(const std::string& name) const {
    for (const SweepColumn& c : columns)
        if (c.name == name) return c;
    throw std::out_of_range("SweepResult: no column named " + name);
}

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    double x1 = b - kGoldenRatio * (b - a);
    double x2 = a + kGoldenRatio * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGoldenRatio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGoldenRatio * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

Optimum optimal_s(CutoffKind cutoff, const TemperatureSpec& t,
                  const QuadratureConfig& cfg) {
    // trapping requires s > 1 at zero T and s > 2 otherwise
    const double lo = t.kind() == TemperatureSpec::Kind::Zero ? 1.05 : 2.05;
    const double hi = 6.0;

    QuadratureConfig tight = cfg;
    tight.abs_tol = std::min(cfg.abs_tol, 1e-12);
    tight.rel_tol = std::min(cfg.rel_tol, 1e-12);
    const auto f = [&](double s) { return lambda_inf_of_s(s, cutoff, t, tight); };

    double s_opt = golden_section_min(f, lo, hi, 1e-5);

    // parabolic polish; the vertex is insensitive to quadrature noise
    const double d = 5e-4;
    const double fm = f(s_opt - d), f0 = f(s_opt), fp = f(s_opt + d);
    const double denom = fp - 2.0 * f0 + fm;
    if (denom > 0.0) {
        const double step = 0.5 * d * (fm - fp) / denom;
        if (std::abs(step) < d) s_opt += step;
    }

    if (f(lo) <= f(s_opt) || f(hi) <= f(s_opt))
        throw std::runtime_error("optimal_s: Lambda(inf) not unimodal on the bracket");
    return {s_opt, std::exp(-f(s_opt))};
}

SweepResult temperature_sweep(CutoffKind cutoff,
                              const std::vector<double>& t_tilde_grid,
                              const QuadratureConfig& cfg, Execution exec) {
    for (size_t i = 0; i < t_tilde_grid.size(); ++i) {
        if (!(t_tilde_grid[i] > 0.0))
            throw std::domain_error("temperature_sweep: t_tilde must be > 0");
        if (i > 0 && !(t_tilde_grid[i] > t_tilde_grid[i - 1]))
            throw std::domain_error("temperature_sweep: grid must be strictly increasing");
    }
    const int n = static_cast<int>(t_tilde_grid.size());
    std::vector<double> s_opt(n), coherence(n);

    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (int i = 0; i < n; ++i) {
        if (failed) continue;
        try {
            const Optimum o = optimal_s(cutoff, TemperatureSpec::finite(t_tilde_grid[i]), cfg);
            s_opt[i] = o.s_opt;
            coherence[i] = o.coherence_at_opt;
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                std::ostringstream oss;
                oss << "temperature_sweep failed at t_tilde=" << t_tilde_grid[i]
                    << ": " << e.what();
                failure = oss.str();
            }
        }
    }
    if (failed) throw std::runtime_error(failure);

    SweepResult sweep;
    sweep.axis_name = "t_tilde";
    sweep.axis = t_tilde_grid;
    sweep.columns.push_back({"s_opt", std::move(s_opt)});
    sweep.columns.push_back({"coherence", std::move(coherence)});
    sweep.metadata["regime"] = "finite";
    sweep.metadata["cutoff"] = cutoff == CutoffKind::Soft ? "soft" : "hard";
    return sweep;
}

SweepResult ohmicity_sweep(const std::vector<double>& s_grid,
                           const TemperatureSpec& t, double tau_max,
                           const QuadratureConfig& cfg, Execution exec) {
    for (size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > 0.0) || s_grid[i] > 8.0)
            throw std::domain_error("ohmicity_sweep: s must be in (0, 8]");
        if (i > 0 && !(s_grid[i] > s_grid[i - 1]))
            throw std::domain_error("ohmicity_sweep: grid must be strictly increasing");
    }
    const int n = static_cast<int>(s_grid.size());
    std::vector<double> coh_soft(n), coh_hard(n), nq_soft(n), nq_hard(n);

    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (int i = 0; i < n; ++i) {
        if (failed) continue;
        try {
            for (CutoffKind cutoff : {CutoffKind::Soft, CutoffKind::Hard}) {
                const SpectralParams p{s_grid[i], 1.0, cutoff};
                const StationaryCoherence sc = stationary_coherence(p, t, cfg);
                const double coh = sc.trapped.value_or(0.0);
                const double nq =
                    nonmarkovianity_measure(p, t, tau_max, cfg, Execution::Serial).n_q;
                if (cutoff == CutoffKind::Soft) {
                    coh_soft[i] = coh;
                    nq_soft[i] = nq;
                } else {
                    coh_hard[i] = coh;
                    nq_hard[i] = nq;
                }
            }
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                std::ostringstream oss;
                oss << "ohmicity_sweep failed at s=" << s_grid[i] << ": " << e.what();
                failure = oss.str();
            }
        }
    }
    if (failed) throw std::runtime_error(failure);

    SweepResult sweep;
    sweep.axis_name = "s";
    sweep.axis = s_grid;
    sweep.columns.push_back({"coherence_soft", std::move(coh_soft)});
    sweep.columns.push_back({"coherence_hard", std::move(coh_hard)});
    sweep.columns.push_back({"nq_soft", std::move(nq_soft)});
    sweep.columns.push_back({"nq_hard", std::move(nq_hard)});
    const size_t base = sweep.columns.size();
    for (size_t i = 0; i < base; ++i) normalize_copy(sweep, sweep.columns[i]);
    sweep.metadata["regime"] = t.name();
    sweep.metadata["tau_max"] = std::to_string(tau_max);
    return sweep;
}

} // namespace dephasim

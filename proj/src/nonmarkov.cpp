#include "dephasim/nonmarkov.hpp"

#include <cmath>
#include <string>

namespace dephasim {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr int kScanPoints = 4000;
constexpr double kRootTol = 1e-6;

struct RateSample {
    double gamma;
    double floor;  // sign decisions require |gamma| above this
};

RateSample sample_rate(const SpectralParams& p, const TemperatureSpec& t,
                       double tau, const QuadratureConfig& cfg) {
    const IntegralResult r = dephasing_rate_full(p, t, tau, cfg);
    return {r.value, std::max(cfg.abs_tol, r.error_estimate)};
}

int rate_sign(const RateSample& s) {
    if (s.gamma < -s.floor) return -1;
    if (s.gamma > s.floor) return 1;
    return 0;
}

double refine_root(const SpectralParams& p, const TemperatureSpec& t,
                   double lo, double hi, double g_lo,
                   const QuadratureConfig& cfg) {
    // bisection on the sign of gamma; g_lo is gamma(lo)
    while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = dephasing_rate(p, t, mid, cfg);
        if ((g_lo < 0.0) == (g_mid < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan_grid(double tau_max) {
    std::vector<double> taus(kScanPoints);
    for (int i = 0; i < kScanPoints; ++i)
        taus[i] = tau_max * (i + 1) / kScanPoints;
    return taus;
}

// Early-exit variant for the crossover predicate: scans from large tau
// downwards since recoherence episodes for this model sit at late times.
bool has_backflow(const SpectralParams& p, const TemperatureSpec& t,
                  double tau_max, const QuadratureConfig& cfg) {
    const std::vector<double> taus = scan_grid(tau_max);
    for (int i = kScanPoints - 1; i >= 0; --i) {
        if (rate_sign(sample_rate(p, t, taus[i], cfg)) < 0) return true;
    }
    return false;
}

} // namespace

double binary_entropy(double prob) {
    if (!(prob >= 0.0) || !(prob <= 1.0))
        throw std::domain_error("binary_entropy: prob must be in [0, 1]");
    if (prob == 0.0 || prob == 1.0) return 0.0;
    return -(prob * std::log2(prob) + (1.0 - prob) * std::log2(1.0 - prob));
}

double channel_capacity(double lambda_value) {
    if (!(lambda_value >= 0.0))
        throw std::domain_error("channel_capacity: Lambda must be >= 0");
    const double z = std::exp(-lambda_value);
    if (z < 0.25) {
        // 1 - H2((1+z)/2) = (1/ln 2) sum_k z^{2k} / (2k (2k-1)); avoids the
        // catastrophic cancellation of the direct formula for small z
        const double z2 = z * z;
        double term = 0.5 * z2;
        double sum = term;
        for (int k = 2; k < 40; ++k) {
            term *= z2;
            const double contrib = term * ((2.0 * k - 2.0) * (2.0 * k - 3.0))
                                   / ((2.0 * k) * (2.0 * k - 1.0));
            term = contrib;
            sum += contrib;
            if (contrib < 1e-18 * sum) break;
        }
        return sum / kLn2;
    }
    return 1.0 - binary_entropy(0.5 * (1.0 + z));
}

std::vector<BackflowInterval> find_backflow_intervals(
    const SpectralParams& p, const TemperatureSpec& t, double tau_max,
    const QuadratureConfig& cfg, Execution exec) {
    p.validate();
    if (!(tau_max > 0.0))
        throw std::domain_error("find_backflow_intervals: tau_max must be > 0");

    const std::vector<double> taus = scan_grid(tau_max);
    std::vector<RateSample> samples(kScanPoints);

    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (int i = 0; i < kScanPoints; ++i) {
        if (failed) continue;
        try {
            samples[i] = sample_rate(p, t, taus[i], cfg);
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed)
        throw QuadratureError(QuadratureError::Kind::NonConvergent,
                              "find_backflow_intervals: " + failure);

    // gamma > 0 for small tau (Lambda grows from 0); track confident signs only
    std::vector<BackflowInterval> intervals;
    int sign = 1;
    double prev_tau = 0.0;
    double prev_gamma = 0.0;
    bool open = false;
    BackflowInterval current;
    for (int i = 0; i < kScanPoints; ++i) {
        const int s_i = rate_sign(samples[i]);
        if (s_i == 0 || s_i == sign) {
            if (s_i != 0) {
                prev_tau = taus[i];
                prev_gamma = samples[i].gamma;
            }
            continue;
        }
        const double lo = prev_tau > 0.0 ? prev_tau : taus[0] * 0.5;
        const double g_lo = prev_tau > 0.0 ? prev_gamma : dephasing_rate(p, t, lo, cfg);
        const double root = refine_root(p, t, lo, taus[i], g_lo, cfg);
        if (s_i < 0) {
            current = BackflowInterval{root, 0.0, false};
            open = true;
        } else if (open) {
            current.end = root;
            intervals.push_back(current);
            open = false;
        }
        sign = s_i;
        prev_tau = taus[i];
        prev_gamma = samples[i].gamma;
    }
    if (open) {
        current.end = tau_max;
        current.truncated = true;
        intervals.push_back(current);
    }
    return intervals;
}

BackflowReport nonmarkovianity_measure(const SpectralParams& p,
                                       const TemperatureSpec& t, double tau_max,
                                       const QuadratureConfig& cfg,
                                       Execution exec) {
    BackflowReport report;
    report.intervals = find_backflow_intervals(p, t, tau_max, cfg, exec);
    for (const BackflowInterval& iv : report.intervals) {
        const double q_a = channel_capacity(dephasing_factor(p, t, iv.begin, cfg));
        const double q_b = channel_capacity(dephasing_factor(p, t, iv.end, cfg));
        report.n_q += std::max(0.0, q_b - q_a);
    }
    return report;
}

double markovian_crossover(const TemperatureSpec& t, CutoffKind cutoff,
                           const QuadratureConfig& cfg) {
    constexpr double kTauMax = 200.0;
    constexpr double kTol = 0.01;
    double lo = 1.0, hi = 6.0;
    const auto predicate = [&](double s) {
        return has_backflow(SpectralParams{s, 1.0, cutoff}, t, kTauMax, cfg);
    };
    if (predicate(lo) || !predicate(hi))
        throw std::runtime_error("markovian_crossover: predicate does not bracket");
    while (hi - lo > kTol) {
        const double mid = 0.5 * (lo + hi);
        (predicate(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace dephasim

#include "dephasim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace dephasim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd nodes.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694,
};

struct PanelEval {
    double value;
    double err;
};

PanelEval gk15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        double fsum;
        if (i == 7) {
            fsum = f(center);
        } else {
            fsum = f(center - half * kXgk[i]) + f(center + half * kXgk[i]);
        }
        if (!std::isfinite(fsum))
            throw QuadratureError(QuadratureError::Kind::NonConvergent,
                                  "integrand not finite inside panel");
        kron += kWgk[i] * fsum;
        if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
    }
    return {kron * half, std::abs(kron - gauss) * half};
}

struct Panel {
    double a, b, value, err;
    int zero_splits;
    bool operator<(const Panel& other) const { return err < other.err; }
};

struct AdaptOutcome {
    double value = 0.0;
    double err = 0.0;
    int panels = 0;
};

// Adaptive refinement over a fixed boundary list. A panel whose lower edge is
// 0 is split with a 0.25 grading ratio; everything else bisects.
AdaptOutcome adapt(const Integrand& f, const std::vector<double>& bounds,
                   double abs_tol, double rel_tol, int max_panels) {
    std::priority_queue<Panel> queue;
    double value = 0.0, err = 0.0;
    int panels = 0;
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        const PanelEval pe = gk15(f, bounds[i], bounds[i + 1]);
        queue.push({bounds[i], bounds[i + 1], pe.value, pe.err, 0});
        value += pe.value;
        err += pe.err;
        ++panels;
    }
    while (err > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (panels >= max_panels)
            throw QuadratureError(QuadratureError::Kind::NonConvergent,
                                  "max_panels exhausted");
        const Panel worst = queue.top();
        queue.pop();
        value -= worst.value;
        err -= worst.err;
        const double split = worst.a == 0.0 ? worst.b * 0.25
                                            : 0.5 * (worst.a + worst.b);
        const PanelEval left = gk15(f, worst.a, split);
        const PanelEval right = gk15(f, split, worst.b);
        const int zs = worst.a == 0.0 ? worst.zero_splits + 1 : 0;
        if (worst.a == 0.0 && zs > 100 &&
            std::abs(left.value) > 0.25 * std::max(abs_tol, rel_tol * std::abs(value)))
            throw QuadratureError(QuadratureError::Kind::NotIntegrable,
                                  "endpoint contribution does not diminish under refinement");
        queue.push({worst.a, split, left.value, left.err, zs});
        queue.push({split, worst.b, right.value, right.err, 0});
        value += left.value + right.value;
        err += left.err + right.err;
        ++panels;
    }
    return {value, err, panels};
}

// Boundaries for (lo, upper] with geometrically graded panels near the
// origin (ratio 0.25) and doubling panels outwards.
std::vector<double> graded_bounds(double lo, double upper) {
    std::vector<double> bounds;
    const double c = std::min(1.0, upper);
    bounds.push_back(lo);
    double x = c * std::pow(0.25, 26);
    while (x < c && x < upper) {
        if (x > lo) bounds.push_back(x);
        x *= 4.0;
    }
    x = c;
    while (x < upper) {
        if (x > bounds.back()) bounds.push_back(x);
        x *= 2.0;
    }
    if (bounds.back() < upper) bounds.push_back(upper);
    return bounds;
}

double auto_tail(const Integrand& f, double abs_tol) {
    double upper = 32.0;
    while (upper < 1048576.0) {
        const double fv = std::abs(f(upper));
        if (std::isfinite(fv) && fv * upper < 0.01 * abs_tol) break;
        upper *= 2.0;
    }
    return upper;
}

// Integral over (0, upper] with optional x^alpha endpoint handling: the
// leading-power contribution below eps is added analytically, the rest is
// handled by graded panels.
IntegralResult integrate_left(const Integrand& f, double upper,
                              std::optional<double> alpha, double abs_tol,
                              double rel_tol, int max_panels) {
    double head = 0.0, head_err = 0.0, lo = 0.0;
    if (alpha && *alpha < 0.0) {
        const double a = *alpha;
        const double eps = 1e-12 * std::min(1.0, upper);
        const double c1 = f(eps) * std::pow(eps, -a);
        const double c2 = f(2.0 * eps) * std::pow(2.0 * eps, -a);
        head = c1 * std::pow(eps, a + 1.0) / (a + 1.0);
        head_err = std::abs(c1 - c2) * std::pow(eps, a + 1.0) / (a + 1.0);
        lo = eps;
    }
    std::vector<double> bounds = graded_bounds(lo, upper);
    const AdaptOutcome out = adapt(f, bounds, 0.5 * abs_tol, 0.5 * rel_tol, max_panels);
    return {head + out.value, head_err + out.err, out.panels};
}

// Incremental Euler transformation of an alternating series.
class EulerSum {
  public:
    double add(double term) {
        double increment;
        if (nterm_ == 0) {
            wksp_.push_back(term);
            increment = 0.5 * term;
            nterm_ = 1;
        } else {
            double tmp = wksp_[0];
            wksp_[0] = term;
            for (size_t j = 1; j < nterm_; ++j) {
                const double dum = wksp_[j];
                wksp_[j] = 0.5 * (wksp_[j - 1] + tmp);
                tmp = dum;
            }
            const double next = 0.5 * (wksp_[nterm_ - 1] + tmp);
            if (std::abs(next) <= std::abs(wksp_[nterm_ - 1])) {
                wksp_.push_back(next);
                ++nterm_;
                increment = 0.5 * next;
            } else {
                increment = next;
            }
        }
        sum_ += increment;
        last_increment_ = increment;
        return sum_;
    }
    double sum() const { return sum_; }
    double last_increment() const { return last_increment_; }

  private:
    std::vector<double> wksp_;
    size_t nterm_ = 0;
    double sum_ = 0.0;
    double last_increment_ = 0.0;
};

// One zero-to-zero segment, refined by bisection to a fixed tolerance.
PanelEval integrate_segment(const Integrand& f, double a, double b, double tol,
                            int depth = 0) {
    const PanelEval whole = gk15(f, a, b);
    if (whole.err <= tol || depth >= 12) return whole;
    const double mid = 0.5 * (a + b);
    const PanelEval left = integrate_segment(f, a, mid, 0.5 * tol, depth + 1);
    const PanelEval right = integrate_segment(f, mid, b, 0.5 * tol, depth + 1);
    return {left.value + right.value, left.err + right.err};
}

} // namespace

IntegralResult integrate_smooth(const Integrand& integrand, const QuadratureConfig& cfg) {
    cfg.validate();
    const double upper = cfg.tail_cut > 0.0 ? cfg.tail_cut
                                            : auto_tail(integrand, cfg.abs_tol);
    IntegralResult res = integrate_left(integrand, upper, cfg.origin_order,
                                        cfg.abs_tol, cfg.rel_tol, cfg.max_panels);
    const double edge = std::abs(integrand(upper));
    if (std::isfinite(edge)) res.error_estimate += edge;  // truncated tail bound
    return res;
}

IntegralResult integrate_oscillatory(const Integrand& envelope, OscMode mode,
                                     double tau, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(tau >= 0.0)) throw std::domain_error("integrate_oscillatory: tau must be >= 0");
    if (tau == 0.0) return {0.0, 0.0, 0};

    const auto product = [&](double x) {
        if (mode == OscMode::Sin) return envelope(x) * std::sin(x * tau);
        const double sh = std::sin(0.5 * x * tau);
        return envelope(x) * 2.0 * sh * sh;  // 1 - cos, cancellation-free
    };
    std::optional<double> alpha_prod;
    if (cfg.origin_order) {
        const double ap = *cfg.origin_order + (mode == OscMode::Sin ? 1.0 : 2.0);
        if (ap < 0.0) alpha_prod = ap;
    }
    const double upper = cfg.tail_cut > 0.0 ? cfg.tail_cut
                                            : auto_tail(envelope, cfg.abs_tol);

    if (tau <= 1.0) {
        IntegralResult res = integrate_left(product, upper, alpha_prod,
                                            cfg.abs_tol, cfg.rel_tol, cfg.max_panels);
        const double edge = std::abs(envelope(upper));
        if (std::isfinite(edge)) res.error_estimate += 2.0 * edge;
        return res;
    }

    const double h = kPi / tau;
    const double x1 = mode == OscMode::Sin ? h : 0.5 * h;

    // region before the first zero of the trig factor
    IntegralResult head = integrate_left(product, x1, alpha_prod,
                                         0.25 * cfg.abs_tol, cfg.rel_tol,
                                         cfg.max_panels);
    double value = head.value;
    double err = head.error_estimate;
    int panels = head.panels_used;

    // CosComplement splits into the plain envelope integral minus the
    // oscillating cosine series on [x1, upper].
    if (mode == OscMode::CosComplement) {
        std::vector<double> bounds = graded_bounds(x1, upper);
        bounds.front() = x1;
        const AdaptOutcome mid = adapt(envelope, bounds, 0.25 * cfg.abs_tol,
                                       0.5 * cfg.rel_tol, cfg.max_panels);
        value += mid.value;
        err += mid.err + std::abs(envelope(upper));
        panels += mid.panels;
    }

    const auto trig_part = [&](double x) {
        return mode == OscMode::Sin ? envelope(x) * std::sin(x * tau)
                                    : envelope(x) * std::cos(x * tau);
    };
    const double sign = mode == OscMode::Sin ? 1.0 : -1.0;

    EulerSum euler;
    double direct = 0.0;
    double series_err = 0.0;
    int below_tol_streak = 0;
    int k = 0;
    bool converged = false;
    const int max_terms = cfg.max_panels;
    double last_term = 0.0;
    while (k < max_terms) {
        const double a = x1 + k * h;
        const double b = a + h;
        if (a >= upper) {
            // alternating remainder bounded by the last included term
            series_err += std::abs(last_term);
            converged = true;
            break;
        }
        const PanelEval seg = integrate_segment(trig_part, a, b, 0.05 * cfg.abs_tol);
        series_err += seg.err;
        last_term = seg.value;
        ++panels;
        if (k < 8) {
            direct += seg.value;
            if (std::abs(seg.value) < 0.05 * cfg.abs_tol) ++below_tol_streak;
            else below_tol_streak = 0;
        } else {
            euler.add(seg.value);
            if (std::abs(euler.last_increment()) < 0.25 * cfg.abs_tol) ++below_tol_streak;
            else below_tol_streak = 0;
        }
        if (below_tol_streak >= 2) {
            converged = true;
            ++k;
            break;
        }
        ++k;
    }
    const double series = direct + euler.sum();
    if (!converged) {
        // slow oscillation: fold the stall into the error estimate
        series_err += std::abs(euler.last_increment()) + std::abs(last_term);
    } else if (k > 8) {
        series_err += std::abs(euler.last_increment());
    }

    value += sign * series;
    err += series_err;
    return {value, err, panels};
}

} // namespace dephasim

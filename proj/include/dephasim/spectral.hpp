#ifndef DEPHASIM_SPECTRAL_HPP
#define DEPHASIM_SPECTRAL_HPP

#include <stdexcept>
#include <string>

namespace dephasim {

/// High-frequency suppression of the spectral density.
/// Soft: exp(-x), Hard: exp(-x^2), with x = omega / omega_c.
enum class CutoffKind { Soft, Hard };

/// Ohmic-family spectral density J = x^s f(x) in units omega_c = 1.
struct SpectralParams {
    double s = 1.0;           // Ohmicity exponent, > 0
    double omega_c = 1.0;     // cutoff frequency, used only for I/O unit conversion
    CutoffKind cutoff = CutoffKind::Soft;

    void validate() const {
        if (!(s > 0.0)) throw std::domain_error("SpectralParams: s must be > 0");
        if (!(omega_c > 0.0)) throw std::domain_error("SpectralParams: omega_c must be > 0");
    }
};

/// Reservoir temperature regime. All temperatures are the dimensionless
/// t_tilde = 2 k_B T / omega_c.
class TemperatureSpec {
  public:
    enum class Kind { Zero, Finite, HighTLimit };

    static TemperatureSpec zero() { return TemperatureSpec(Kind::Zero, 0.0); }
    static TemperatureSpec finite(double t_tilde) {
        require_positive(t_tilde);
        return TemperatureSpec(Kind::Finite, t_tilde);
    }
    static TemperatureSpec high_t_limit(double t_tilde) {
        require_positive(t_tilde);
        return TemperatureSpec(Kind::HighTLimit, t_tilde);
    }

    Kind kind() const { return kind_; }
    double t_tilde() const { return t_tilde_; }
    std::string name() const {
        switch (kind_) {
            case Kind::Zero: return "zero";
            case Kind::Finite: return "finite";
            default: return "high";
        }
    }

  private:
    TemperatureSpec(Kind k, double t) : kind_(k), t_tilde_(t) {}
    static void require_positive(double t) {
        if (!(t > 0.0)) throw std::domain_error("TemperatureSpec: t_tilde must be > 0");
    }
    Kind kind_;
    double t_tilde_;
};

/// Limit of x * g(x, T) as x -> 0; decides whether Lambda(t) saturates.
enum class OriginClass { Diverges, FiniteNonzero, Vanishes };

enum class Convexity { Convex, NonConvex };

/// Cutoff factor f(x), equal to 1 at x = 0 and nonincreasing for x >= 0.
double cutoff_value(CutoffKind kind, double x);

/// J(x) = x^s f(x); requires x >= 0.
double spectral_density(const SpectralParams& p, double x);

/// g(x, T) = J(x)/x^2 * coth(x / t_tilde) with the regime-specific coth
/// replacement; requires x > 0.
double g_function(const SpectralParams& p, const TemperatureSpec& t, double x);

/// Power alpha such that g(x) ~ c x^alpha as x -> 0.
double g_origin_order(const SpectralParams& p, const TemperatureSpec& t);

OriginClass origin_class(const SpectralParams& p, const TemperatureSpec& t);

/// Finite-difference convexity estimate of g on a log-spaced grid.
Convexity convexity_check(const SpectralParams& p, const TemperatureSpec& t,
                          double x_max = 20.0, int n = 2048);

/// Truncation point beyond which x^a f(x) envelopes fall below abs_tol
/// (with a 25% margin), per cutoff kind.
double tail_cut_for(const SpectralParams& p, const TemperatureSpec& t, double abs_tol);

} // namespace dephasim

#endif

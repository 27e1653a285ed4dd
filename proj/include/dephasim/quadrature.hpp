#ifndef DEPHASIM_QUADRATURE_HPP
#define DEPHASIM_QUADRATURE_HPP

#include <functional>
#include <optional>
#include <stdexcept>

namespace dephasim {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_panels = 4096;
    /// Truncation point of the semi-infinite axis; <= 0 means "determine
    /// automatically by doubling until the envelope is negligible".
    double tail_cut = 0.0;
    /// Known order alpha of an integrable endpoint behavior x^alpha of the
    /// envelope at x = 0 (alpha > -1). Enables the power substitution that
    /// removes the singularity; unset means the integrand is assumed benign.
    std::optional<double> origin_order;

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::domain_error("QuadratureConfig: abs_tol must be > 0");
        if (!(rel_tol > 0.0)) throw std::domain_error("QuadratureConfig: rel_tol must be > 0");
        if (max_panels < 8) throw std::domain_error("QuadratureConfig: max_panels must be >= 8");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels_used = 0;
};

class QuadratureError : public std::runtime_error {
  public:
    enum class Kind { NonConvergent, NotIntegrable };
    QuadratureError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/// Trigonometric factor of the oscillatory integrand:
/// CosComplement integrates envelope(x) * (1 - cos(x tau)),
/// Sin integrates envelope(x) * sin(x tau).
enum class OscMode { CosComplement, Sin };

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (15/7) integration of a smooth-envelope integrand
/// over (0, infinity), truncated at tail_cut.
IntegralResult integrate_smooth(const Integrand& integrand, const QuadratureConfig& cfg);

/// Oscillatory integral over (0, infinity). For tau <= 1 integrates the
/// product directly; for tau > 1 partitions the axis at the zeros of the
/// trigonometric factor and Euler-accelerates the alternating panel sums.
IntegralResult integrate_oscillatory(const Integrand& envelope, OscMode mode,
                                     double tau, const QuadratureConfig& cfg);

} // namespace dephasim

#endif

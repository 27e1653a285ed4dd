#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dephasim/optimizer.hpp"

using namespace dephasim;

namespace {
const QuadratureConfig kCfg;
// location of the Gamma-function minimum on (1, 2)
constexpr double kXStar = 1.4616321449683623;
}  // namespace

TEST_CASE("golden_section_min on analytic functions") {
    const double m1 = golden_section_min([](double x) { return (x - 2.0) * (x - 2.0); },
                                         0.0, 5.0, 1e-8);
    CHECK(m1 == doctest::Approx(2.0).epsilon(1e-6));
    const double m2 = golden_section_min([](double x) { return std::cosh(x - 0.7); },
                                         -3.0, 3.0, 1e-8);
    CHECK(m2 == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("optimal_s: zero temperature") {
    // minimizing 2 Gamma(s-1) gives s = 1 + x*; Gamma((s-1)/2) gives s = 1 + 2x*
    const Optimum soft = optimal_s(CutoffKind::Soft, TemperatureSpec::zero(), kCfg);
    CHECK(soft.s_opt == doctest::Approx(1.0 + kXStar).epsilon(2e-4));
    CHECK(soft.coherence_at_opt
          == doctest::Approx(std::exp(-2.0 * std::tgamma(kXStar))).epsilon(1e-6));

    const Optimum hard = optimal_s(CutoffKind::Hard, TemperatureSpec::zero(), kCfg);
    CHECK(hard.s_opt == doctest::Approx(1.0 + 2.0 * kXStar).epsilon(2e-4));
    CHECK(hard.coherence_at_opt
          == doctest::Approx(std::exp(-std::tgamma(kXStar))).epsilon(1e-6));
}

TEST_CASE("optimal_s: high-temperature limit") {
    // 2 t Gamma(s-2) -> s = 2 + x*; t Gamma(s/2 - 1) -> s = 2 + 2x*
    const auto th = TemperatureSpec::high_t_limit(1.0);
    const Optimum soft = optimal_s(CutoffKind::Soft, th, kCfg);
    CHECK(soft.s_opt == doctest::Approx(2.0 + kXStar).epsilon(2e-4));
    const Optimum hard = optimal_s(CutoffKind::Hard, th, kCfg);
    CHECK(hard.s_opt == doctest::Approx(2.0 + 2.0 * kXStar).epsilon(2e-4));
    // the optimum location does not depend on t_tilde in this regime
    const Optimum soft5 = optimal_s(CutoffKind::Soft, TemperatureSpec::high_t_limit(5.0), kCfg);
    CHECK(soft5.s_opt == doctest::Approx(soft.s_opt).epsilon(1e-4));
}

TEST_CASE("optimal_s: finite temperature sits between the limits") {
    const Optimum o = optimal_s(CutoffKind::Soft, TemperatureSpec::finite(1.0), kCfg);
    CHECK(o.s_opt > 1.0 + kXStar);
    CHECK(o.s_opt < 2.0 + kXStar);
    CHECK(o.coherence_at_opt > 0.0);
    CHECK(o.coherence_at_opt < 1.0);
}

TEST_CASE("temperature_sweep") {
    const std::vector<double> grid{0.1, 1.0, 10.0};
    const SweepResult sweep = temperature_sweep(CutoffKind::Soft, grid, kCfg);
    CHECK(sweep.axis_name == "t_tilde");
    CHECK(sweep.axis == grid);
    const auto& s_opt = sweep.column("s_opt").values;
    const auto& coherence = sweep.column("coherence").values;
    REQUIRE(s_opt.size() == 3);
    // warming moves the optimum up and degrades the best coherence
    CHECK(s_opt[0] < s_opt[1]);
    CHECK(s_opt[1] < s_opt[2]);
    CHECK(coherence[0] > coherence[1]);
    CHECK(coherence[1] > coherence[2]);
    CHECK_THROWS_AS(sweep.column("nope"), std::out_of_range);
    CHECK_THROWS_AS(temperature_sweep(CutoffKind::Soft, {1.0, 1.0}, kCfg),
                    std::domain_error);
    CHECK_THROWS_AS(temperature_sweep(CutoffKind::Soft, {-1.0, 1.0}, kCfg),
                    std::domain_error);
}

TEST_CASE("ohmicity_sweep") {
    const std::vector<double> grid{1.5, 2.5, 3.5};
    const SweepResult sweep =
        ohmicity_sweep(grid, TemperatureSpec::zero(), 50.0, kCfg);
    CHECK(sweep.axis_name == "s");
    const auto& coh_soft = sweep.column("coherence_soft").values;
    const auto& coh_hard = sweep.column("coherence_hard").values;
    const auto& nq_soft = sweep.column("nq_soft").values;
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(coh_soft[i]
              == doctest::Approx(std::exp(-2.0 * std::tgamma(grid[i] - 1.0))).epsilon(1e-10));
        CHECK(coh_hard[i]
              == doctest::Approx(std::exp(-std::tgamma(0.5 * (grid[i] - 1.0)))).epsilon(1e-10));
        CHECK(nq_soft[i] >= 0.0);
    }
    // sub-threshold dynamics are monotone; above threshold they are not
    CHECK(nq_soft[0] == 0.0);
    CHECK(nq_soft[2] > 0.0);
    // normalized copies peak at 1 (or stay 0 for an all-zero column)
    const auto& nq_norm = sweep.column("nq_soft_norm").values;
    double peak = 0.0;
    for (double v : nq_norm) peak = std::max(peak, v);
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(ohmicity_sweep({9.0}, TemperatureSpec::zero(), 50.0, kCfg),
                    std::domain_error);
    CHECK_THROWS_AS(ohmicity_sweep({2.0, 1.0}, TemperatureSpec::zero(), 50.0, kCfg),
                    std::domain_error);
}

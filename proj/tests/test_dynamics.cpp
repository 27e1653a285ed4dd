#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dephasim/dynamics.hpp"

using namespace dephasim;

namespace {

const QuadratureConfig kCfg;  // defaults
const auto kZero = TemperatureSpec::zero();

// Closed forms for the soft cutoff at zero temperature:
// Lambda(tau) = 2 Gamma(s-1) [1 - (1+tau^2)^{(1-s)/2} cos((s-1) atan tau)]
// gamma(tau)  = 2 Gamma(s)   (1+tau^2)^{-s/2} sin(s atan tau)
double lambda_exact(double s, double tau) {
    const double theta = std::atan(tau);
    return 2.0 * std::tgamma(s - 1.0)
           * (1.0 - std::pow(1.0 + tau * tau, 0.5 * (1.0 - s))
                        * std::cos((s - 1.0) * theta));
}

double gamma_exact(double s, double tau) {
    const double theta = std::atan(tau);
    return 2.0 * std::tgamma(s) * std::pow(1.0 + tau * tau, -0.5 * s)
           * std::sin(s * theta);
}

}  // namespace

TEST_CASE("TimeGrid") {
    const TimeGrid g = TimeGrid::uniform(5.0, 10);
    CHECK(g.tau.size() == 11);
    CHECK(g.tau.front() == 0.0);
    CHECK(g.tau.back() == 5.0);
    CHECK_NOTHROW(g.validate());
    TimeGrid bad;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad.tau = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    CHECK_THROWS_AS(TimeGrid::uniform(-1.0, 10), std::domain_error);
}

TEST_CASE("resolve_config fills tail and origin order") {
    const SpectralParams p{1.5, 1.0, CutoffKind::Soft};
    const QuadratureConfig rc = resolve_config(p, kZero, kCfg);
    CHECK(rc.tail_cut > 1.0);
    REQUIRE(rc.origin_order.has_value());
    CHECK(*rc.origin_order == -0.5);
    // explicit settings are left alone
    QuadratureConfig manual = kCfg;
    manual.tail_cut = 7.0;
    manual.origin_order = 0.25;
    const QuadratureConfig rc2 = resolve_config(p, kZero, manual);
    CHECK(rc2.tail_cut == 7.0);
    CHECK(*rc2.origin_order == 0.25);
}

TEST_CASE("Lambda: Ohmic log closed form") {
    const SpectralParams p{1.0, 1.0, CutoffKind::Soft};
    CHECK(dephasing_factor(p, kZero, 0.0, kCfg) == 0.0);
    for (double tau : {0.5, 1.0, 5.0, 20.0, 1000.0}) {
        const double exact = std::log(1.0 + tau * tau);
        CHECK(dephasing_factor(p, kZero, tau, kCfg)
              == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("Lambda: soft-cutoff closed form across s") {
    for (double s : {0.5, 1.5, 2.0, 2.5, 3.0, 4.0}) {
        const SpectralParams p{s, 1.0, CutoffKind::Soft};
        for (double tau : {0.3, 1.0, 5.0, 50.0}) {
            const double exact = lambda_exact(s, tau);
            CHECK(dephasing_factor(p, kZero, tau, kCfg)
                  == doctest::Approx(exact).epsilon(1e-7));
        }
    }
}

TEST_CASE("gamma: soft-cutoff closed form across s") {
    for (double s : {0.5, 1.0, 1.5, 2.5, 3.0}) {
        const SpectralParams p{s, 1.0, CutoffKind::Soft};
        for (double tau : {0.3, 1.0, 5.0, 50.0}) {
            const double exact = gamma_exact(s, tau);
            CHECK(dephasing_rate(p, kZero, tau, kCfg)
                  == doctest::Approx(exact).epsilon(1e-7));
        }
    }
    // sign change of the rate for s = 3 happens at tau = sqrt(3)
    const SpectralParams p3{3.0, 1.0, CutoffKind::Soft};
    CHECK(dephasing_rate(p3, kZero, 1.7, kCfg) > 0.0);
    CHECK(dephasing_rate(p3, kZero, 1.8, kCfg) < 0.0);
}

TEST_CASE("gamma at tau = 1 for the Ohmic case") {
    // dLambda/dtau of ln(1 + tau^2) at tau = 1 is exactly 1
    const SpectralParams p{1.0, 1.0, CutoffKind::Soft};
    CHECK(dephasing_rate(p, kZero, 1.0, kCfg) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dephasing_rate(p, kZero, 0.0, kCfg) == 0.0);
}

TEST_CASE("Lambda: brute-force trapezoid oracle, hard cutoff at finite T") {
    const SpectralParams p{2.5, 1.0, CutoffKind::Hard};
    const auto t = TemperatureSpec::finite(0.8);
    const double tau = 3.0;
    const int n = 2'000'000;
    const double upper = 12.0;
    long double acc = 0.0L;
    for (int i = 1; i <= n; ++i) {
        const double x = upper * i / n;
        const double sh = std::sin(0.5 * x * tau);
        const double f = std::pow(x, 0.5) * std::exp(-x * x)
                         / std::tanh(x / 0.8) * 2.0 * sh * sh;
        acc += (i == n) ? 0.5L * f : f;
    }
    const double oracle = 2.0 * static_cast<double>(acc * (upper / n));
    CHECK(dephasing_factor(p, t, tau, kCfg) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("Lambda at finite temperature: frozen high-precision references") {
    // reference values computed with 50-digit arithmetic in an independent
    // CAS evaluation of the defining integrals
    const auto t1 = TemperatureSpec::finite(1.0);
    CHECK(dephasing_factor({3.0, 1.0, CutoffKind::Soft}, t1, 5.0, kCfg)
          == doctest::Approx(2.86379330865295).epsilon(1e-9));
    CHECK(stationary_lambda({3.0, 1.0, CutoffKind::Soft}, t1, kCfg)
          == doctest::Approx(2.93480220054468).epsilon(1e-9));
    CHECK(stationary_lambda({4.0, 1.0, CutoffKind::Soft}, TemperatureSpec::finite(2.0), kCfg)
          == doctest::Approx(5.61645522527675).epsilon(1e-9));
    CHECK(stationary_lambda({3.0, 1.0, CutoffKind::Hard}, t1, kCfg)
          == doctest::Approx(2.0436283101322).epsilon(1e-9));
    CHECK(stationary_lambda({2.5, 1.0, CutoffKind::Hard}, TemperatureSpec::finite(0.5), kCfg)
          == doctest::Approx(2.29801085354814).epsilon(1e-9));
}

TEST_CASE("stationary_lambda closed Gamma forms") {
    for (double s : {1.5, 2.0, 3.0, 4.5}) {
        CHECK(stationary_lambda({s, 1.0, CutoffKind::Soft}, kZero, kCfg)
              == doctest::Approx(2.0 * std::tgamma(s - 1.0)).epsilon(1e-13));
        CHECK(stationary_lambda({s, 1.0, CutoffKind::Hard}, kZero, kCfg)
              == doctest::Approx(std::tgamma(0.5 * (s - 1.0))).epsilon(1e-13));
    }
    const auto th = TemperatureSpec::high_t_limit(3.0);
    for (double s : {2.5, 3.0, 4.0}) {
        CHECK(stationary_lambda({s, 1.0, CutoffKind::Soft}, th, kCfg)
              == doctest::Approx(6.0 * std::tgamma(s - 2.0)).epsilon(1e-13));
        CHECK(stationary_lambda({s, 1.0, CutoffKind::Hard}, th, kCfg)
              == doctest::Approx(3.0 * std::tgamma(0.5 * s - 1.0)).epsilon(1e-13));
    }
    // divergent cases refuse
    CHECK_THROWS_AS(stationary_lambda({1.0, 1.0, CutoffKind::Soft}, kZero, kCfg),
                    std::domain_error);
    CHECK_THROWS_AS(stationary_lambda({2.0, 1.0, CutoffKind::Soft},
                                      TemperatureSpec::finite(1.0), kCfg),
                    std::domain_error);
}

TEST_CASE("stationary_coherence trapping classification") {
    const StationaryCoherence trapped =
        stationary_coherence({3.0, 1.0, CutoffKind::Soft}, kZero, kCfg);
    REQUIRE(trapped.trapped.has_value());
    CHECK(*trapped.trapped == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK_FALSE(trapped.vanishing());

    const StationaryCoherence lost =
        stationary_coherence({1.0, 1.0, CutoffKind::Soft}, kZero, kCfg);
    CHECK(lost.vanishing());
    CHECK(stationary_coherence({2.0, 1.0, CutoffKind::Soft},
                               TemperatureSpec::finite(1.0), kCfg)
              .vanishing());
}

TEST_CASE("compute_trace: serial and parallel agree bitwise") {
    const SpectralParams p{2.5, 1.0, CutoffKind::Soft};
    const TimeGrid grid = TimeGrid::uniform(10.0, 40);
    const DephasingTrace serial = compute_trace(p, kZero, grid, kCfg, Execution::Serial);
    const DephasingTrace parallel =
        compute_trace(p, kZero, grid, kCfg, Execution::Parallel);
    REQUIRE(serial.lambda.size() == parallel.lambda.size());
    for (size_t i = 0; i < serial.lambda.size(); ++i) {
        CHECK(serial.lambda[i] == parallel.lambda[i]);
        CHECK(serial.gamma[i] == parallel.gamma[i]);
    }
    CHECK(serial.lambda.front() == 0.0);
    CHECK(serial.gamma.front() == 0.0);
    // below the recoherence threshold (s < 2) Lambda grows monotonically
    const DephasingTrace sub = compute_trace({1.5, 1.0, CutoffKind::Soft}, kZero,
                                             grid, kCfg, Execution::Serial);
    for (size_t i = 1; i < sub.lambda.size(); ++i)
        CHECK(sub.lambda[i] > sub.lambda[i - 1]);
}

TEST_CASE("coherence_evolution") {
    const SpectralParams p{3.0, 1.0, CutoffKind::Soft};
    const DephasingTrace trace =
        compute_trace(p, kZero, TimeGrid::uniform(4.0, 8), kCfg);
    const std::vector<double> coh = coherence_evolution(0.5, trace);
    REQUIRE(coh.size() == trace.lambda.size());
    CHECK(coh.front() == 0.5);
    for (size_t i = 0; i < coh.size(); ++i)
        CHECK(coh[i] == doctest::Approx(0.5 * std::exp(-trace.lambda[i])));
    CHECK_THROWS_AS(coherence_evolution(0.6, trace), std::domain_error);
    CHECK_THROWS_AS(coherence_evolution(-0.1, trace), std::domain_error);
}

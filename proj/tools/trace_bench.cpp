// Benchmark: serial reference vs OpenMP-parallel trace computation.
// The two paths must agree bitwise.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "dephasim/dynamics.hpp"

using namespace dephasim;
using clock_type = std::chrono::steady_clock;

int main(int argc, char** argv) {
    double tau_max = 50.0;
    int points = 400;
    double s = 2.5;
    if (argc > 1) points = std::atoi(argv[1]);
    if (argc > 2) s = std::atof(argv[2]);

    const SpectralParams p{s, 1.0, CutoffKind::Soft};
    const TemperatureSpec t = TemperatureSpec::zero();
    const TimeGrid grid = TimeGrid::uniform(tau_max, points);
    const QuadratureConfig cfg;

    // warm-up (touches static tables)
    compute_trace(p, t, TimeGrid::uniform(1.0, 4), cfg, Execution::Serial);

    const auto t0 = clock_type::now();
    const DephasingTrace serial = compute_trace(p, t, grid, cfg, Execution::Serial);
    const auto t1 = clock_type::now();
    const DephasingTrace parallel = compute_trace(p, t, grid, cfg, Execution::Parallel);
    const auto t2 = clock_type::now();

    int mismatches = 0;
    for (size_t i = 0; i < serial.lambda.size(); ++i) {
        if (serial.lambda[i] != parallel.lambda[i]) ++mismatches;
        if (serial.gamma[i] != parallel.gamma[i]) ++mismatches;
    }

    const double serial_s = std::chrono::duration<double>(t1 - t0).count();
    const double parallel_s = std::chrono::duration<double>(t2 - t1).count();
    std::printf("grid points        : %d\n", points + 1);
    std::printf("serial             : %.3f s\n", serial_s);
    std::printf("parallel (OpenMP)  : %.3f s\n", parallel_s);
    std::printf("speedup            : %.2fx\n", serial_s / parallel_s);
    std::printf("bitwise mismatches : %d\n", mismatches);
    if (mismatches != 0) {
        std::fprintf(stderr, "FAIL: serial and parallel paths disagree\n");
        return 1;
    }
    return 0;
}

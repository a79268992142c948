// Slow acceptance check: the convergent tail of the shell series. Each shell
// s sums, over integer flow times with total s, the measure of the sublevel
// set delta <= e^{-gamma total}. For the power curve the tail must decay
// hard (the series converges, which is what makes almost-every-point
// extremality fall out of Borel-Cantelli); the radial example is built to
// approximate faster and its tail should stay visibly fatter.

#include <chrono>
#include <cstdio>
#include <numeric>
#include <string>

#include "latflow/maps.hpp"
#include "latflow/nondivergence.hpp"

using namespace latflow;

namespace {

double head3(const ShellSeries& s) {
    return s.shell_measure[0] + s.shell_measure[1] + s.shell_measure[2];
}

double tail3(const ShellSeries& s) {
    std::size_t m = s.shell_measure.size();
    return s.shell_measure[m - 3] + s.shell_measure[m - 2] + s.shell_measure[m - 1];
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    Ball ball{0.3, 0.2, 0.2, false};
    const double gamma = 0.2;
    const int T_max = 15;
    const std::size_t samples = 40000;

    auto extremal = borel_cantelli_series(mahler_curve(2), ball, gamma, T_max, samples, 300);
    auto fat = borel_cantelli_series(nonextremal_example(), ball, gamma, T_max, samples, 300);

    double ratio_extremal = head3(extremal) > 0 ? tail3(extremal) / head3(extremal) : 0;
    double ratio_fat = head3(fat) > 0 ? tail3(fat) / head3(fat) : 1e300;

    bool decays = head3(extremal) > 0 && tail3(extremal) <= 0.2 * head3(extremal);
    bool separated = ratio_fat >= 3 * ratio_extremal;
    bool pass = decays && separated;

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion 9: %s - tail/head %.4g for the power curve, %.4g for the radial "
                "example, series total %.4g vs %.4g (%.0fs)\n",
                pass ? "PASS" : "FAIL", ratio_extremal, ratio_fat,
                extremal.partial_sum.back(), fat.partial_sum.back(), secs);
    return pass ? 0 : 1;
}

// det(I - kappa^2 K_Ai) on [t, inf) by Nystrom, next to exp(-F) from the
// Ablowitz-Segur solution.
#include "edgejump/fredholm/determinants.hpp"
#include "edgejump/painleve/ablowitz_segur.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace edgejump;
    const double kappa = 0.7;
    const ASolution s = solve_as(kappa, -6.5);
    for (double t = -6; t <= 2; t += 1) {
        const cplx d = airy_fredholm_det(kappa * kappa, t);
        std::printf("t=%5.1f  det=%.15f  exp(-F)=%.15f\n", t, d.real(), std::exp(-s.F(t)).real());
    }
}

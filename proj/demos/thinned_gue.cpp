// Thinned GUE: remove each eigenvalue with probability s and compare the
// chance of an empty [lambda0, inf) with the finite-n determinant.
#include "edgejump/fredholm/determinants.hpp"
#include "edgejump/rmt/sim.hpp"
#include "edgejump/weightlab/opsystem.hpp"

#include <cstdio>

int main() {
    using namespace edgejump;
    const int n = 30;
    const double s = 0.5, lambda0 = WeightParams::edge(0.0, n, 0.0).lambda0();
    const ThinningStats st = thinning_experiment(n, lambda0, s, 50000, 1);
    const McEstimate p = st.probability();
    std::printf("MC %.5f +- %.5f   det %.5f\n", p.mean, p.stderr_, finite_n_det(n, lambda0, 1 - s).real());
}

// Hankel determinant of the jump weight at the soft edge, against its
// Painleve II asymptotics, for a few n.
#include "edgejump/asympt/compare.hpp"

#include <cstdio>

int main() {
    using namespace edgejump;
    const cplx beta(0, 0.4);
    const double t = 0.0;
    const ASolution sol = sweep_solution(beta, t);
    for (int n : {20, 40, 80}) {
        const ReportRow r = compare_thm12(edge_data(n, t, beta), sol);
        std::printf("n=%3d  finite=%.10f%+.10fi  asym=%.10f%+.10fi  rel=%.2e\n", n, r.finite.real(), r.finite.imag(), r.asym.real(),
                    r.asym.imag(), r.rel_res);
    }
}

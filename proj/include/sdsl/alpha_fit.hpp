#pragma once

#include <vector>

#include "sdsl/errors.hpp"

namespace sdsl {

// One empirical TAR measurement: mean accepted tokens per iteration (bonus
// token included, so 1 <= measured_tar <= lookahead + 1) at a lookahead.
struct TarObservation {
    double lookahead;     // gamma_i
    double measured_tar;  // b_i
};

struct AlphaEstimate {
    double alpha;
    double std_error;
    double ci_low;
    double ci_high;
    double residual_variance;
    std::size_t dof;
};

// r_i = E(alpha, gamma_i) - b_i with E the geometric TAR model.
std::vector<double> tar_residuals(double alpha, const std::vector<TarObservation>& obs);

// dr_i/dalpha = [-(g+1) a^g (1-a) + (1 - a^(g+1))] / (1-a)^2.
std::vector<double> tar_jacobian(double alpha, const std::vector<TarObservation>& obs);

// Least-squares alpha over (eps, 1-eps): golden-section on the residual sum
// of squares, then a Gauss-Newton polish. Confidence interval from
// sigma^2 = RSS/(n-1) and Var(alpha) = sigma^2 / (J^T J), z = 1.96.
AlphaEstimate estimate_alpha(const std::vector<TarObservation>& obs);

}  // namespace sdsl

#include "idg/design.hpp"

#include <cmath>
#include <string>

#include "idg/error.hpp"
#include "idg/rng.hpp"

namespace idg {

DesignParams compute_params(int n, int r, int d, const SideInfo& side, double delta) {
    if (!(delta > 0.0)) fail(ErrorKind::invalid_input, "delta must be positive");
    if (r < 1 || d < 1)
        fail(ErrorKind::invalid_input, "design parameters require r >= 1 and d >= 1");
    if (n <= r + d)
        fail(ErrorKind::invalid_input,
             "n = " + std::to_string(n) + " must exceed r + d = " + std::to_string(r + d));
    side.validate(r, d);

    DesignParams params;
    params.n = n;
    params.r = r;
    params.d = d;
    params.side = side;
    params.i_eff = side.effective_i_max(r);
    params.delta = delta;
    params.delta1 = delta + 1.0;
    params.delta2 = delta + 1.0;

    const double i_eff = params.i_eff;
    params.p1 = 1.0 / (3.0 * (i_eff + d));
    params.p2 = 1.0 / (2.0 * i_eff);
    params.b_max = 1.0 - std::pow(1.0 - params.p1, i_eff);
    params.q2_ub = 1.0 - std::pow(1.0 - params.p1, static_cast<double>(d));
    params.tau = (1.0 - params.b_max - params.q2_ub) / (2.0 * params.b_max);
    params.threshold_fraction = ((1.0 - params.b_max) + params.q2_ub) / 2.0;

    const double ln2 = std::log(2.0);
    const double ln_n = std::log(static_cast<double>(n));
    const double log2_n = std::log2(static_cast<double>(n));
    const double concentration = 1.0 - std::exp(-2.0);

    // Step-1 budget against misclassifying any item, and the extra step-2
    // budget the single-matrix design needs so each defective keeps enough
    // exclusive positive pools.
    const double step1 =
        27.0 * (i_eff + d) * (std::log(static_cast<double>(n - d - r)) / ln_n + params.delta1) *
        ln2 / concentration;
    const double step2_na =
        (81.0 / 4.0) * (i_eff + d) * (i_eff + d) *
        (std::log(static_cast<double>(n - d)) / ln_n + params.delta2) * ln2;
    const double step2_a =
        4.0 * i_eff * (std::log(static_cast<double>(n - d)) / ln_n + params.delta2) * ln2;

    params.beta1 = step1;
    params.beta_na = std::max(step1, step2_na);
    params.beta2 = step2_a;
    params.t1 = static_cast<int>(std::ceil(params.beta1 * log2_n));
    params.t_na = static_cast<int>(std::ceil(params.beta_na * log2_n));
    params.t2 = static_cast<int>(std::ceil(params.beta2 * log2_n));
    return params;
}

StagePlan plan_adaptive(const DesignParams& params, int n, int d) {
    if (n != params.n || d != params.d)
        fail(ErrorKind::invalid_input, "stage plan requested for a different (n, d) than the params");
    StagePlan plan;
    plan.t1 = params.t1;
    plan.n1 = n;
    plan.t2 = params.t2;
    plan.n2 = n - d;
    plan.total = static_cast<long long>(params.t1) + static_cast<long long>(d) * params.t2;
    return plan;
}

PoolingMatrix generate_matrix(int t, int n, double p, std::uint64_t seed) {
    if (t < 1 || n < 1) fail(ErrorKind::invalid_input, "matrix dimensions must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::invalid_input, "p must lie in [0, 1]");
    PoolingMatrix matrix(t, n);
    Rng rng(seed);
    for (int l = 0; l < t; ++l)
        for (int j = 0; j < n; ++j)
            if (rng.bernoulli(p)) matrix.set(l, j, true);
    return matrix;
}

}  // namespace idg

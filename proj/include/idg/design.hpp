#pragma once

#include <cstdint>

#include "idg/matrix.hpp"
#include "idg/model.hpp"

namespace idg {

// Every constant derived from (n, r, d, side, delta) that the pooling
// designs and the decoder need. Probabilities p1/p2 drive the Bernoulli
// matrices; threshold_fraction is the step-1 decision level
// 1 - b_max * (1 + tau); the betas fix the test counts T = ceil(beta * log2 n).
struct DesignParams {
    int n = 0;
    int r = 0;
    int d = 0;
    SideInfo side;
    int i_eff = 0;  // I_max under WSI, r under NSI

    double delta = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;

    double p1 = 0.0;
    double p2 = 0.0;
    double b_max = 0.0;   // worst-case negative-outcome probability for a defective
    double q2_ub = 0.0;   // best-case positive-outcome probability for a non-defective
    double tau = 0.0;
    double threshold_fraction = 0.0;

    double beta_na = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    int t_na = 0;
    int t1 = 0;
    int t2 = 0;
};

// Dimensions of the two-stage adaptive design: M1 is t1 x n, M2 is
// t2 x (n - d), and each stage-2 pool is tested d times (once per declared
// defective), so the total test count is t1 + d * t2.
struct StagePlan {
    int t1 = 0;
    int n1 = 0;
    int t2 = 0;
    int n2 = 0;
    long long total = 0;
};

DesignParams compute_params(int n, int r, int d, const SideInfo& side, double delta);

StagePlan plan_adaptive(const DesignParams& params, int n, int d);

// T x n matrix with i.i.d. Bernoulli(p) entries; deterministic given seed.
PoolingMatrix generate_matrix(int t, int n, double p, std::uint64_t seed);

}  // namespace idg

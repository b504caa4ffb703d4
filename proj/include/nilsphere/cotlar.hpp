#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

// Square-function form of the almost-orthogonality principle. For a family
// T_n with ||T_n|| <= A and ||T_n T_{n'}^*||, ||T_n^* T_{n'}|| <= B^2
// 2^{-eps|n-n'|}, every f satisfies
//
//   sum_n ||T_n f||^2 <= A * sum_{m in Z} min(A, B 2^{-eps|m|}) * ||f||^2,
//
// and the right side is O(A^2 (1 + log(B/A)/eps)).
struct OperatorFamily {
    std::vector<Eigen::MatrixXcd> ops;
    double eps = 0.5;
};

struct CotlarCheck {
    double A = 0.0;           // max ||T_n||
    double B = 0.0;           // cross-decay constant (inflated to >= 2A)
    double rhs_factor = 0.0;  // A * sum_m min(A, B 2^{-eps|m|})
    double worst_ratio = 0.0; // max over probes of lhs / rhs
    bool hypotheses_ok = false;
    bool pass = false;
};

// Window-shift family: T_n = A P_{W_n} U P_{W'_n} with strided coordinate
// windows; cross products vanish beyond |n-n'| > width, so the decay
// hypothesis holds with eps = 1/2 and B = 2A.
OperatorFamily make_banded_family(Rng& rng, int dim, int count, int width,
                                  double amplitude);
// Dense random family; A and B are measured from the family itself so the
// hypotheses hold by construction.
OperatorFamily make_random_family(Rng& rng, int dim, int count);

CotlarCheck cotlar_check(const OperatorFamily& fam, Rng& rng, int probes = 12);

}  // namespace nilsphere

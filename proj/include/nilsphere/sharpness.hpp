#pragma once

#include <Eigen/Dense>

#include <vector>

#include "nilsphere/kernels.hpp"

namespace nilsphere {

// Endpoint profile |y|^{1-d} |log|y||^{-1}, smoothly tapered off outside
// |y| = outer_radius (the taper is identically 1 for |y| <= outer_radius/2)
// and truncated to zero inside |y| < inner_cutoff.  The central variable is
// cut off by a plateau bump of radius v_radius.  This is the standard
// example showing that the L^{d/(d-1)} endpoint for the spherical maximal
// function fails: the profile is just barely in L^{d/(d-1)} (the dyadic
// shell sums converge like j^{-d/(d-1)}), yet circular averages blow up
// along dyadic probes approaching the singularity.
struct SteinFunction {
    int d = 2;
    double inner_cutoff = 0.0;   // 0 means no inner truncation
    double outer_radius = 0.25;  // taper support; plateau ends at half this
    double v_radius = 0.5;       // plateau radius of the central cutoff

    double radial(double r) const;
    double value(const Eigen::VectorXd& y, double v) const;
};

// Nonisotropic ball B_delta = {(x,u) : |x| <= delta, |u| <= delta^2}.
struct BallSpec {
    double delta = 1.0;
    bool contains(const Eigen::VectorXd& x, double u) const;
};

// One dyadic shell 2^{-j-1} <= |y| <= 2^{-j} of the L^p mass of the profile.
struct ShellRow {
    int j = 0;
    double integral = 0.0;     // quadrature of |f|^p over the shell
    double closed_form = 0.0;  // exact value where available (d=2, p=2), else NaN
    double partial_sum = 0.0;
};

struct ShellTable {
    int d = 2;
    double p = 2.0;
    std::vector<ShellRow> rows;
    double pow2_exponent = 0.0;  // fitted a in shell_j ~ 2^{-a j} j^{-b}
    double log_exponent = 0.0;   // fitted b
    double raabe_limit = 0.0;    // tail median of j (1 - s_{j+1}/s_j)
    bool convergent = false;     // ratio test, refined by Raabe when ratio -> 1
};

// Dyadic shell decomposition of the L^p mass of the untruncated profile.
// Shells start at j_lo >= 3 so that the outer taper is identically 1 on
// every shell and the d = 2, p = 2 closed form is exact.
ShellTable stein_lp_profile(int d, double p, int j_lo = 3, int j_hi = 14);

// One truncation level of the blowup experiment: the profile truncated at
// eps = 2^{-level} is averaged over dilates of the unit circle (with the
// step-two twist in the central variable) at a probe 8 * 2^{-level} from
// the singular point.
struct BlowupRow {
    int level = 0;
    double probe_radius = 0.0;
    double mf = 0.0;         // sup over the dilation scan of the average
    double mf_smooth = 0.0;  // same probe/scan, smooth reference function
    double lp_partial = 0.0; // L^{d/(d-1)} norm of the truncated profile
};

struct BlowupTable {
    std::vector<BlowupRow> rows;
    double growth = 0.0;        // fitted log2 increment of mf per level
    double smooth_growth = 0.0; // same fit for the smooth reference
    bool monotone = false;      // mf strictly increasing across levels
    double lp_bound = 0.0;      // sup of the partial norms (stays finite)
};

// Circular-average blowup on the first Heisenberg group: the maximal
// averages at probes x_j = (8 * 2^{-j}, 0) of the profile truncated at
// 2^{-j} grow like 2^j / j while the L^2 norms stay bounded.
BlowupTable blowup_experiment(int level_lo = 4, int level_hi = 8);

struct EndpointRow {
    int q = 0;
    double eps = 0.0;
    double average = 0.0;
};

struct EndpointTable {
    std::vector<EndpointRow> rows;
    bool monotone = false;    // averages strictly increase as eps -> 0
    double log_slope = 0.0;   // fitted slope of average against log(q)
    double correlation = 0.0; // R^2 of that fit
};

// Fixed-probe divergence: the circle of radius t0 = |x0| centred at the
// probe passes through the singular point, and the averages of the
// truncated profiles grow without bound (doubly-logarithmically in the
// truncation) as the inner cutoff 2^{-q} shrinks.
EndpointTable endpoint_divergence(int q_lo = 4, int q_hi = 12);

// One row of the integral smoothness (Hormander-type) check for a dyadic
// band kernel: the translation difference, measured in L^1 away from a
// ball around the translation, against the two structural bounds.
struct HormanderRow {
    int k = 0;
    int l = 0;
    double r = 0.0;
    double integral = 0.0;    // worst translation in B_r of
                              // int_{B_{10r}^c} sup_s |K_s(h^{-1} g) - K_s(g)| dg
    double bound_band = 0.0;  // 2^{k-l} (1 + |Lambda| 2^l)
    double bound_grad = 0.0;  // 2^{k(m+2)} min(1/r, r)
    double ratio = 0.0;       // integral / min(bound_band, bound_grad)
};

struct HormanderTable {
    std::vector<HormanderRow> rows;
    double fitted_constant = 0.0;           // max ratio over the rows
    double disjoint_support_integral = 0.0; // zero when 10r clears both supports
    double continuity_value = 0.0;          // integral for a near-identity shift
};

// Translation-difference check over a grid of band indices and shift radii,
// with rows measured by 3-d midpoint quadrature at resolution 2^{-k-2}.
HormanderTable hormander_condition_check(const KernelConfig& cfg,
                                         const std::vector<int>& k_list,
                                         const std::vector<int>& l_list,
                                         const std::vector<double>& r_list,
                                         int threads = 0);

}  // namespace nilsphere

#pragma once

#include <functional>
#include <vector>

#include "nilsphere/grid.hpp"
#include "nilsphere/group.hpp"

namespace nilsphere {

// Group convolution on the lattice for d = 2, m = 1 with commutator
// x^t J y = twist * (x1 y2 - x2 y1):
//
//   (f * g)(x, u) = hx^2 hu  sum_{y,v} f(y, v) g(x - y, u - v + x^t J y).
//
// The central argument u - v + x^t J y is generally off-lattice; g is read
// there through its band-limited (trigonometric) interpolant in the central
// variable, with frequencies 2 pi nu / (Nu hu), nu in [-Nu/2, Nu/2). With
// that convention the central-axis DFT diagonalizes the convolution exactly,
// so the direct sum below and the DFT-accelerated path agree to rounding and
// the operation is exactly associative (as long as supports stay inside the
// box, since the lattice is treated periodically).
GridFn group_convolve_direct(const GridFn& f, const GridFn& g, double twist);
GridFn group_convolve(const GridFn& f, const GridFn& g, double twist,
                      int threads = 0);

// g^*(x,u) = conj g(-x,-u); satisfies <f*g, h> = <f, h*g^*> on the lattice.
GridFn adjoint_kernel(const GridFn& g);

// Operator norm of f |-> f * g on L^2 of the lattice.
double convolution_operator_norm(const GridFn& g, double twist,
                                 std::uint64_t seed = 7, double tol = 1e-6,
                                 int max_iter = 500, int threads = 0);
// Dense singular-value oracle (assembles the full matrix; dimension <= 4096).
double convolution_operator_norm_dense(const GridFn& g, double twist,
                                       int threads = 0);

// Discrete maximal average: sup over t in t_list of |f * K_t| pointwise,
// where K_t is the dilated kernel sampled on the lattice by the callback
// kernel_at(t, x1, x2, u). Returns the pointwise max field.
GridFn maximal_function(const GridFn& f,
                        const std::function<cd(double, double, double, double)>& kernel_at,
                        const std::vector<double>& t_list, double twist,
                        int threads = 0);

}  // namespace nilsphere

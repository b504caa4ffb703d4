#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

// Node-centered periodic lattice for functions on R^2 x R (d = 2, m = 1):
// axis coordinates (i - N/2) h, so 0 is a lattice point and the lattice is
// closed under negation (with the +R = -R periodic identification).
struct GridSpec {
    double Rx = 1.0;  // half-extent of each horizontal axis
    double Ru = 1.0;  // half-extent of the central axis
    int Nx = 16;
    int Nu = 16;

    double hx() const { return 2.0 * Rx / Nx; }
    double hu() const { return 2.0 * Ru / Nu; }
    double xcoord(int i) const { return (i - Nx / 2) * hx(); }
    double ucoord(int j) const { return (j - Nu / 2) * hu(); }
    std::size_t total() const {
        return static_cast<std::size_t>(Nx) * Nx * Nu;
    }
    double cell_volume() const { return hx() * hx() * hu(); }
    bool operator==(const GridSpec& o) const {
        return Rx == o.Rx && Ru == o.Ru && Nx == o.Nx && Nu == o.Nu;
    }
};

struct GridFn {
    GridSpec g;
    std::vector<cd> v;

    GridFn() = default;
    explicit GridFn(const GridSpec& spec) : g(spec), v(spec.total(), cd(0.0)) {}

    cd& at(int i1, int i2, int j) {
        return v[(static_cast<std::size_t>(i1) * g.Nx + i2) * g.Nu + j];
    }
    cd at(int i1, int i2, int j) const {
        return v[(static_cast<std::size_t>(i1) * g.Nx + i2) * g.Nu + j];
    }
};

GridFn sample_grid(const GridSpec& g,
                   const std::function<cd(double, double, double)>& f);  // f(x1, x2, u)

cd grid_inner(const GridFn& a, const GridFn& b);  // L2 inner product, volume-weighted
double grid_norm(const GridFn& a);

}  // namespace nilsphere

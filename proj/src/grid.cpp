#include "nilsphere/grid.hpp"

#include <cmath>

namespace nilsphere {

GridFn sample_grid(const GridSpec& g,
                   const std::function<cd(double, double, double)>& f) {
    GridFn out(g);
    for (int i1 = 0; i1 < g.Nx; ++i1)
        for (int i2 = 0; i2 < g.Nx; ++i2)
            for (int j = 0; j < g.Nu; ++j)
                out.at(i1, i2, j) = f(g.xcoord(i1), g.xcoord(i2), g.ucoord(j));
    return out;
}

cd grid_inner(const GridFn& a, const GridFn& b) {
    cd s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * std::conj(b.v[i]);
    return s * a.g.cell_volume();
}

double grid_norm(const GridFn& a) {
    double s = 0.0;
    for (const cd& z : a.v) s += std::norm(z);
    return std::sqrt(s * a.g.cell_volume());
}

}  // namespace nilsphere

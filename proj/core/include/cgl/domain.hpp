#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cgl {

/// Interval (0, L1) or rectangle (0, L1) x (0, L2) with homogeneous Dirichlet
/// boundary.  Only the strictly interior grid points x_j = j*h are stored;
/// boundary values are identically zero.
struct Domain {
    int dimension = 1;                 // 1 or 2
    std::array<double, 2> length{0.0, 0.0};
    std::array<int, 2> res{0, 0};      // interior points per dimension

    static Domain interval(double l1, int n1) {
        Domain d;
        d.dimension = 1;
        d.length = {l1, 0.0};
        d.res = {n1, 0};
        d.validate();
        return d;
    }

    static Domain rectangle(double l1, double l2, int n1, int n2) {
        Domain d;
        d.dimension = 2;
        d.length = {l1, l2};
        d.res = {n1, n2};
        d.validate();
        return d;
    }

    void validate() const {
        if (dimension != 1 && dimension != 2)
            throw std::invalid_argument("Domain: dimension must be 1 or 2");
        for (int d = 0; d < dimension; ++d) {
            if (!(length[d] > 0.0))
                throw std::invalid_argument("Domain: side lengths must be positive");
            if (res[d] < 4)
                throw std::invalid_argument("Domain: resolution must be >= 4");
        }
    }

    double spacing(int d) const { return length[d] / (res[d] + 1); }

    /// Interior coordinate x_j = (j+1)*h along dimension d, j = 0..res[d]-1.
    double coord(int d, int j) const { return (j + 1) * spacing(d); }

    std::size_t num_points() const {
        return dimension == 1 ? std::size_t(res[0])
                              : std::size_t(res[0]) * std::size_t(res[1]);
    }

    /// Quadrature cell volume, prod_d h_d.
    double cell_volume() const {
        double v = spacing(0);
        if (dimension == 2) v *= spacing(1);
        return v;
    }

    friend bool operator==(const Domain& a, const Domain& b) {
        return a.dimension == b.dimension && a.length == b.length && a.res == b.res;
    }
    friend bool operator!=(const Domain& a, const Domain& b) { return !(a == b); }
};

/// Values on the interior grid of a Domain, row-major in (x1, x2).
struct RealGrid {
    std::array<int, 2> shape{0, 0};
    std::vector<double> values;

    RealGrid() = default;
    explicit RealGrid(const Domain& d)
        : shape(d.res), values(d.num_points(), 0.0) {}

    double& operator()(std::size_t i) { return values[i]; }
    double operator()(std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }

    bool matches(const Domain& d) const {
        return d.dimension == 1 ? (shape[0] == d.res[0] && values.size() == d.num_points())
                                : (shape == d.res && values.size() == d.num_points());
    }
};

inline void require_matching(const Domain& d, const RealGrid& g, const char* what) {
    if (!g.matches(d))
        throw std::invalid_argument(std::string(what) + ": grid shape does not match domain");
}

}  // namespace cgl

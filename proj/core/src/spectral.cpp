#include "cgl/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace cgl {

namespace {

// FFTW plan creation is not thread-safe; new-array execution is.  Plans are
// cached per grid shape and created under a lock, with FFTW_UNALIGNED so they
// may run on any std::vector buffer.
class DstPlanCache {
  public:
    static DstPlanCache& instance() {
        static DstPlanCache cache;
        return cache;
    }

    fftw_plan get(const std::array<int, 2>& shape, int dimension) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(shape[0], dimension == 2 ? shape[1] : 0);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<double> in(dimension == 2 ? std::size_t(shape[0]) * shape[1]
                                              : std::size_t(shape[0]));
        std::vector<double> out(in.size());
        fftw_plan p;
        if (dimension == 1) {
            p = fftw_plan_r2r_1d(shape[0], in.data(), out.data(), FFTW_RODFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        } else {
            p = fftw_plan_r2r_2d(shape[0], shape[1], in.data(), out.data(),
                                 FFTW_RODFT00, FFTW_RODFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

// Unnormalized DST-I: y_k = 2 sum_j x_j sin(pi j k / (n+1)) along each
// transformed dimension.
std::vector<double> dst_raw(const Domain& d, const std::vector<double>& x) {
    std::vector<double> in(x), out(x.size());
    fftw_plan p = DstPlanCache::instance().get(d.res, d.dimension);
    fftw_execute_r2r(p, in.data(), out.data());
    return out;
}

}  // namespace

SpectralBasis build_basis(const Domain& domain) {
    domain.validate();
    SpectralBasis b;
    b.domain = domain;
    b.nu.resize(domain.num_points());
    const double pi = M_PI;
    if (domain.dimension == 1) {
        for (int k = 1; k <= domain.res[0]; ++k) {
            double w = k * pi / domain.length[0];
            b.nu[k - 1] = w * w;
        }
    } else {
        std::size_t idx = 0;
        for (int k1 = 1; k1 <= domain.res[0]; ++k1) {
            double w1 = k1 * pi / domain.length[0];
            for (int k2 = 1; k2 <= domain.res[1]; ++k2, ++idx) {
                double w2 = k2 * pi / domain.length[1];
                b.nu[idx] = w1 * w1 + w2 * w2;
            }
        }
    }
    b.lambda1 = b.nu[0];
    return b;
}

ModeVector to_modes(const Domain& domain, const RealGrid& grid) {
    require_matching(domain, grid, "to_modes");
    ModeVector m(domain);
    auto y = dst_raw(domain, grid.values);
    double scale = 1.0 / (domain.res[0] + 1);
    if (domain.dimension == 2) scale /= (domain.res[1] + 1);
    for (std::size_t i = 0; i < y.size(); ++i) m.a[i] = y[i] * scale;
    return m;
}

RealGrid from_modes(const Domain& domain, const ModeVector& modes) {
    if (modes.size() != domain.num_points())
        throw std::invalid_argument("from_modes: mode vector does not match domain");
    RealGrid g(domain);
    auto y = dst_raw(domain, modes.a);
    double scale = domain.dimension == 1 ? 0.5 : 0.25;
    for (std::size_t i = 0; i < y.size(); ++i) g.values[i] = y[i] * scale;
    return g;
}

double integrate(const Domain& domain, const RealGrid& grid) {
    require_matching(domain, grid, "integrate");
    double s = 0.0;
    for (double v : grid.values) s += v;
    return s * domain.cell_volume();
}

double inner(const Domain& domain, const RealGrid& a, const RealGrid& b) {
    require_matching(domain, a, "inner");
    require_matching(domain, b, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
    return s * domain.cell_volume();
}

double norm_sq(const Domain& domain, const RealGrid& a) { return inner(domain, a, a); }

double mode_weight(const Domain& domain) {
    double w = domain.length[0] / 2.0;
    if (domain.dimension == 2) w *= domain.length[1] / 2.0;
    return w;
}

}  // namespace cgl

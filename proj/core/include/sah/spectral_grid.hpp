#pragma once

#include <cstdint>
#include <vector>

#include "sah/trig_poly.hpp"

namespace sah {

/// Smallest power of two >= n.
int next_pow2(int n);

/// Tensor field sampled on the uniform grid y_j = j/N of the unit torus.
/// Entry (r, c) occupies channel r*cols + c; each channel holds N^d values
/// in row-major grid order.
struct GridField {
    int rows = 1;
    int cols = 1;
    std::vector<std::vector<cplx>> channels;

    std::size_t points() const { return channels.empty() ? 0 : channels.front().size(); }
    Tensor at(std::size_t point) const;
};

/// Uniform N^d grid with FFTW-backed transforms between sparse Fourier
/// coefficients and point values.
class SpectralGrid {
public:
    SpectralGrid(int dim, int n);

    int dim() const { return dim_; }
    int n() const { return n_; }
    std::int64_t points() const { return points_; }

    /// Point values of p on the grid. Requires 2K+1 <= N so that no two
    /// modes of p share a grid frequency.
    GridField to_values(const TrigPoly& p) const;
    /// Fourier coefficients of the sampled field, restricted to |k|_inf <= K.
    TrigPoly to_poly(const GridField& f, int K, Shape shape) const;
    /// Mean of each channel (the zero Fourier mode), tree-summed.
    Tensor mean(const GridField& f) const;

    /// Flat grid index of a (wrapped) mode.
    std::int64_t index_of(const Mode& k) const;

private:
    void transform(std::vector<cplx>& data, int sign) const;

    int dim_;
    int n_;
    std::int64_t points_;
};

} // namespace sah

#include "sah/spectral_grid.hpp"

#include <mutex>

#include <fftw3.h>

#include "sah/errors.hpp"

namespace sah {

namespace {

// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class FftPlan {
public:
    FftPlan(int dim, int n, cplx* data, int sign)
    {
        int dims[3] = {n, n, n};
        auto* p = reinterpret_cast<fftw_complex*>(data);
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan_ = fftw_plan_dft(dim, dims, p, p, sign, FFTW_ESTIMATE);
        if (!plan_) throw NumericalFailure("fft", "FFTW failed to create a plan");
    }
    ~FftPlan()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void run() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

} // namespace

int next_pow2(int n)
{
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

Tensor GridField::at(std::size_t point) const
{
    Tensor t(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            t(r, c) = channels[static_cast<std::size_t>(r * cols + c)][point];
    return t;
}

SpectralGrid::SpectralGrid(int dim, int n) : dim_(dim), n_(n)
{
    require(dim >= 1 && dim <= 3, "dimension", "grid dimension must be 1, 2 or 3");
    require(n >= 1, "grid", "grid size must be positive");
    points_ = 1;
    for (int i = 0; i < dim; ++i) points_ *= n;
}

std::int64_t SpectralGrid::index_of(const Mode& k) const
{
    std::int64_t idx = 0;
    for (int i = 0; i < dim_; ++i) {
        int w = k[i] % n_;
        if (w < 0) w += n_;
        idx = idx * n_ + w;
    }
    return idx;
}

void SpectralGrid::transform(std::vector<cplx>& data, int sign) const
{
    FftPlan plan(dim_, n_, data.data(), sign);
    plan.run();
}

GridField SpectralGrid::to_values(const TrigPoly& p) const
{
    require(p.dim() == dim_, "dimension-mismatch", "polynomial and grid dimensions differ");
    require(2 * p.support_radius() + 1 <= n_, "grid",
            "grid too small to hold the polynomial without aliasing");
    GridField f;
    f.rows = p.rows();
    f.cols = p.cols();
    f.channels.assign(static_cast<std::size_t>(f.rows * f.cols),
                      std::vector<cplx>(static_cast<std::size_t>(points_)));
    for (const auto& [k, v] : p.coeffs()) {
        const auto idx = static_cast<std::size_t>(index_of(k));
        for (int r = 0; r < f.rows; ++r)
            for (int c = 0; c < f.cols; ++c)
                f.channels[static_cast<std::size_t>(r * f.cols + c)][idx] = v(r, c);
    }
    for (auto& ch : f.channels) transform(ch, FFTW_BACKWARD);
    return f;
}

TrigPoly SpectralGrid::to_poly(const GridField& f, int K, Shape shape) const
{
    require(2 * K + 1 <= n_, "grid", "requested truncation exceeds the grid Nyquist limit");
    const Lattice lat(dim_, K);
    TrigPoly out(lat, shape);
    require(out.rows() == f.rows && out.cols() == f.cols, "shape-mismatch",
            "field shape does not match requested polynomial shape");
    std::vector<std::vector<cplx>> spec = f.channels;
    for (auto& ch : spec) transform(ch, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(points_);
    for (const Mode& k : lat.modes()) {
        const auto idx = static_cast<std::size_t>(index_of(k));
        Tensor v(f.rows, f.cols);
        for (int r = 0; r < f.rows; ++r)
            for (int c = 0; c < f.cols; ++c)
                v(r, c) = spec[static_cast<std::size_t>(r * f.cols + c)][idx] * scale;
        if (!v.isZero(0.0)) out.set(k, v);
    }
    return out;
}

Tensor SpectralGrid::mean(const GridField& f) const
{
    Tensor out(f.rows, f.cols);
    for (int r = 0; r < f.rows; ++r)
        for (int c = 0; c < f.cols; ++c)
            out(r, c) = tree_sum(f.channels[static_cast<std::size_t>(r * f.cols + c)], cplx{}) /
                        static_cast<double>(points_);
    return out;
}

} // namespace sah

#include "nlss/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

namespace nlss {

std::array<double, 2> Grid::point(std::size_t idx) const {
    if (d == 1) return {coord(static_cast<int>(idx)), 0.0};
    return {coord(static_cast<int>(idx / N)), coord(static_cast<int>(idx % N))};
}

void Grid::validate() const {
    if (d != 1 && d != 2) throw ValidationError("time evolution supports d = 1 or 2");
    if (N < 8 || (N & (N - 1)) != 0) throw ValidationError("grid size must be a power of two >= 8");
    if (!(L > 0)) throw ValidationError("box half-width must be positive");
}

FieldState FieldState::zeros(const Grid& g) {
    g.validate();
    FieldState s;
    s.grid = g;
    s.u[0].assign(g.size(), 0.0);
    s.u[1].assign(g.size(), 0.0);
    return s;
}

struct Spectral::Impl {
    fftw_complex* buf = nullptr;
    fftw_plan fw = nullptr, bw = nullptr;
};

Spectral::Spectral(const Grid& g) : g_(g), impl_(std::make_unique<Impl>()) {
    g.validate();
    const std::size_t n = g.size();
    impl_->buf = fftw_alloc_complex(n);
    // unaligned plans so they can run in place on std::vector storage
    const unsigned flags = FFTW_MEASURE | FFTW_UNALIGNED;
    {
        static std::mutex planner;  // the FFTW planner is not thread-safe
        std::lock_guard<std::mutex> lock(planner);
        if (g.d == 1) {
            impl_->fw = fftw_plan_dft_1d(g.N, impl_->buf, impl_->buf, FFTW_FORWARD, flags);
            impl_->bw = fftw_plan_dft_1d(g.N, impl_->buf, impl_->buf, FFTW_BACKWARD, flags);
        } else {
            impl_->fw = fftw_plan_dft_2d(g.N, g.N, impl_->buf, impl_->buf, FFTW_FORWARD, flags);
            impl_->bw = fftw_plan_dft_2d(g.N, g.N, impl_->buf, impl_->buf, FFTW_BACKWARD, flags);
        }
    }
    std::vector<double> k1(g.N);
    for (int i = 0; i < g.N; ++i) {
        const int m = i <= g.N / 2 ? i : i - g.N;
        k1[i] = kPi * m / g.L;
    }
    // odd derivative drops the unpaired Nyquist mode
    std::vector<double> k1odd = k1;
    k1odd[g.N / 2] = 0;
    k2_.resize(n);
    k_[0].resize(n);
    k_[1].assign(n, 0.0);
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (g.d == 1) {
            k2_[idx] = k1[idx] * k1[idx];
            k_[0][idx] = k1odd[idx];
        } else {
            const std::size_t i = idx / g.N, j = idx % g.N;
            k2_[idx] = k1[i] * k1[i] + k1[j] * k1[j];
            k_[0][idx] = k1odd[i];
            k_[1][idx] = k1odd[j];
        }
    }
}

Spectral::~Spectral() {
    if (impl_) {
        fftw_destroy_plan(impl_->fw);
        fftw_destroy_plan(impl_->bw);
        fftw_free(impl_->buf);
    }
}

namespace {
fftw_complex* raw(std::vector<cplx>& v) { return reinterpret_cast<fftw_complex*>(v.data()); }
}  // namespace

void Spectral::forward(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    if (&in != &out) out = in;
    forward_inplace(out);
}

void Spectral::backward(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    if (&in != &out) out = in;
    backward_inplace(out);
}

void Spectral::forward_inplace(std::vector<cplx>& u) const {
    if (u.size() != g_.size()) throw ValidationError("field size does not match the grid");
    fftw_execute_dft(impl_->fw, raw(u), raw(u));
}

void Spectral::backward_inplace(std::vector<cplx>& u) const {
    if (u.size() != g_.size()) throw ValidationError("field size does not match the grid");
    fftw_execute_dft(impl_->bw, raw(u), raw(u));
    const double s = 1.0 / static_cast<double>(u.size());
    for (auto& z : u) z *= s;
}

std::vector<cplx> Spectral::gradient(const std::vector<cplx>& u, int axis) const {
    std::vector<cplx> f;
    forward(u, f);
    const auto& k = k_[axis];
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= cplx(0, k[i]);
    backward(f, f);
    return f;
}

double Spectral::grad_sq(const std::vector<cplx>& u) const {
    std::vector<cplx> f;
    forward(u, f);
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]) * k2_[i];
    return s * g_.cell() / static_cast<double>(f.size());
}

double l2sq(const Grid& g, const std::vector<cplx>& u) {
    double s = 0;
    for (const auto& z : u) s += std::norm(z);
    return s * g.cell();
}

double nyquist_fraction(const Spectral& sp, const std::vector<cplx>& u) {
    std::vector<cplx> f;
    sp.forward(u, f);
    const double kn = kPi / sp.grid().h();
    const double cut = 0.25 * kn * kn;
    double hi = 0, all = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double e = std::norm(f[i]) * sp.k2()[i];
        all += e;
        if (sp.k2()[i] > cut) hi += e;
    }
    return all > 0 ? hi / all : 0.0;
}

}  // namespace nlss

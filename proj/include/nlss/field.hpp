#pragma once

#include <array>
#include <memory>
#include <vector>

#include "nlss/types.hpp"

namespace nlss {

// Uniform periodic grid on [-L, L)^d with N points per axis (d = 1 or 2).
struct Grid {
    int d = 1;
    int N = 1024;
    double L = 20;

    double h() const { return 2 * L / N; }
    std::size_t size() const { return d == 1 ? std::size_t(N) : std::size_t(N) * N; }
    double cell() const { return d == 1 ? h() : h() * h(); }
    double coord(int i) const { return -L + i * h(); }
    // point index -> (x, y); y = 0 in d = 1
    std::array<double, 2> point(std::size_t idx) const;
    void validate() const;
};

struct FieldState {
    Grid grid;
    std::array<std::vector<cplx>, 2> u;
    double t = 0;

    static FieldState zeros(const Grid& g);
};

// Cached FFTW plans for one grid. Forward is unnormalized, backward divides by size().
class Spectral {
public:
    explicit Spectral(const Grid& g);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    const Grid& grid() const { return g_; }
    void forward(const std::vector<cplx>& in, std::vector<cplx>& out) const;
    void backward(const std::vector<cplx>& in, std::vector<cplx>& out) const;
    void forward_inplace(std::vector<cplx>& u) const;
    void backward_inplace(std::vector<cplx>& u) const;
    const std::vector<double>& k2() const { return k2_; }
    const std::vector<double>& k(int axis) const { return k_[axis]; }

    // derivative along an axis (spectral)
    std::vector<cplx> gradient(const std::vector<cplx>& u, int axis) const;
    // int |grad u|^2 via Parseval
    double grad_sq(const std::vector<cplx>& u) const;

private:
    struct Impl;
    Grid g_;
    std::unique_ptr<Impl> impl_;
    std::vector<double> k2_;
    std::array<std::vector<double>, 2> k_;
};

double l2sq(const Grid& g, const std::vector<cplx>& u);
// Fraction of int |grad u|^2 carried by modes with |k| above half the Nyquist wavenumber.
double nyquist_fraction(const Spectral& s, const std::vector<cplx>& u);

}  // namespace nlss

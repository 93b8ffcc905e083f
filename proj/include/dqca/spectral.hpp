#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "dqca/params.hpp"

namespace dqca {

// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<std::complex<double>, 4>;
using Spinor = std::array<std::complex<double>, 2>;

// Single-step walk matrix in momentum space,
//   U(k) = [[n e^{ik}, -i m], [-i m, n e^{-ik}]].
// Accepts m = 0 (used only when probing the massless edge).
Mat2 walk_matrix(double k, const AutomatonParams& p);

// omega(k) = arccos(n cos k), in [0, pi].
double dispersion(double k, const AutomatonParams& p);

// v(k) = d omega / dk = n sin k / sqrt(1 - n^2 cos^2 k); |v| <= n.
double group_velocity(double k, const AutomatonParams& p);

// Orthonormal eigenspinors of U(k): plus belongs to eigenvalue e^{-i omega},
// minus to e^{+i omega}. Gauge: first component real and non-negative; if it
// vanishes, second component real and positive. Throws degeneracy_error when
// the spectrum is degenerate (possible only at m = 0 with sin k = 0).
struct EigenPair {
    Spinor plus;
    Spinor minus;
};
EigenPair eigenspinors(double k, const AutomatonParams& p);

// Effective Hamiltonian H(k) = (omega/sin omega)(-n sin k sigma3 + m sigma1),
// Hermitian, traceless, with exp(-i H(k)) = U(k). Requires m > 0.
Mat2 effective_hamiltonian(double k, const AutomatonParams& p);

// DFT momentum grid for a ring of N sites (N even): k_j = 2 pi j / N mapped
// into [-pi, pi), stored in FFT bin order so k(0) = 0.
class MomentumGrid {
public:
    explicit MomentumGrid(std::size_t sites);
    std::size_t size() const noexcept { return k_.size(); }
    double k(std::size_t j) const { return k_[j]; }
    const std::vector<double>& points() const noexcept { return k_; }

private:
    std::vector<double> k_;
};

// Everything spectral about one mode, bundled for table builders.
struct ModeData {
    double k;
    double omega;
    double v;
    Spinor plus;
    Spinor minus;
};
ModeData mode_data(double k, const AutomatonParams& p);

} // namespace dqca

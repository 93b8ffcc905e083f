#include "dqca/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dqca/errors.hpp"

namespace dqca {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

// sin(omega(k)) = sqrt(m^2 + n^2 sin^2 k), strictly positive for m > 0.
double sin_omega(double k, const AutomatonParams& p) {
    const double ns = p.n * std::sin(k);
    return std::sqrt(p.m * p.m + ns * ns);
}

} // namespace

Mat2 walk_matrix(double k, const AutomatonParams& p) {
    const std::complex<double> hop = std::polar(p.n, k);
    return {hop, -I * p.m, -I * p.m, std::conj(hop)};
}

double dispersion(double k, const AutomatonParams& p) {
    return std::acos(std::clamp(p.n * std::cos(k), -1.0, 1.0));
}

double group_velocity(double k, const AutomatonParams& p) {
    const double s = sin_omega(k, p);
    if (s == 0.0)
        throw degeneracy_error("group velocity undefined at a degenerate momentum");
    return p.n * std::sin(k) / s;
}

EigenPair eigenspinors(double k, const AutomatonParams& p) {
    if (p.m == 0.0 && std::sin(k) == 0.0)
        throw degeneracy_error("walk spectrum degenerate at m = 0, sin k = 0");
    const double v = group_velocity(k, p);
    const double a = std::sqrt(std::max(0.0, 1.0 - v) / 2.0);
    const double b = std::sqrt(std::max(0.0, 1.0 + v) / 2.0);
    return EigenPair{{a, b}, {b, -a}};
}

Mat2 effective_hamiltonian(double k, const AutomatonParams& p) {
    if (!(p.m > 0.0))
        throw std::invalid_argument("effective Hamiltonian requires m > 0");
    const double w = dispersion(k, p);
    const double scale = w / sin_omega(k, p);
    const double a = scale * p.n * std::sin(k);
    const double b = scale * p.m;
    return {-a, b, b, a};
}

MomentumGrid::MomentumGrid(std::size_t sites) {
    if (sites < 4 || sites % 2 != 0)
        throw std::invalid_argument("momentum grid needs an even ring size >= 4");
    k_.resize(sites);
    const double step = 2.0 * std::numbers::pi / double(sites);
    for (std::size_t j = 0; j < sites; ++j) {
        const double jj = j < sites / 2 ? double(j) : double(j) - double(sites);
        k_[j] = step * jj;
    }
}

ModeData mode_data(double k, const AutomatonParams& p) {
    const auto pair = eigenspinors(k, p);
    return ModeData{k, dispersion(k, p), group_velocity(k, p), pair.plus, pair.minus};
}

} // namespace dqca

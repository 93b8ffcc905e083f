#include "dqca/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dqca/errors.hpp"
#include "dqca/fft.hpp"
#include "dqca/spectral.hpp"

namespace dqca {

namespace {

constexpr double tau = 2.0 * std::numbers::pi;

// Signed circular distance k - k0 mapped into [-pi, pi).
double circular_delta(double k, double k0) {
    double r = std::fmod(k - k0 + std::numbers::pi, tau);
    if (r < 0.0) r += tau;
    return r - std::numbers::pi;
}

void check_spec(std::size_t sites, const WavepacketSpec& spec) {
    const double pop = std::norm(spec.c_plus) + std::norm(spec.c_minus);
    if (std::abs(pop - 1.0) > 1e-12)
        throw std::invalid_argument("branch weights must satisfy |c+|^2 + |c-|^2 = 1");
    if (!(spec.sigma > 0.0))
        throw std::invalid_argument("packet width sigma must be positive");
    const double dk = tau / double(sites);
    if (spec.sigma < 8.0 * dk)
        throw resolution_error("packet width " + std::to_string(spec.sigma) +
                               " is below 8 momentum-grid spacings (" + std::to_string(8.0 * dk) +
                               "); enlarge the ring or widen the packet");
}

} // namespace

FieldState build_packet(std::size_t sites, const AutomatonParams& p, const WavepacketSpec& spec) {
    check_spec(sites, spec);
    const MomentumGrid grid(sites);
    std::vector<cplx> hat(2 * sites);
    for (std::size_t j = 0; j < sites; ++j) {
        const double k = grid.k(j);
        const double d = circular_delta(k, spec.k0);
        const double g = std::exp(-d * d / (2.0 * spec.sigma * spec.sigma));
        const auto eig = eigenspinors(k, p);
        const cplx amp = g * std::polar(1.0, -k * spec.x0);
        hat[2 * j] = amp * (spec.c_plus * eig.plus[0] + spec.c_minus * eig.minus[0]);
        hat[2 * j + 1] = amp * (spec.c_plus * eig.plus[1] + spec.c_minus * eig.minus[1]);
    }
    RingFft fft(sites);
    FieldState s(sites);
    fft.backward(hat.data(), s.amps().data());
    s.renormalize();
    const double mass = guard_band_probability(s);
    if (mass > 1e-8) throw leakage_error(0, mass, 1e-8);
    return s;
}

FieldState branch_project(const FieldState& s, const AutomatonParams& p, int branch) {
    if (branch != 1 && branch != -1)
        throw std::invalid_argument("branch must be +1 or -1");
    const std::size_t sites = s.sites();
    const MomentumGrid grid(sites);
    RingFft fft(sites);
    std::vector<cplx> hat(2 * sites);
    fft.forward(s.amps().data(), hat.data());
    for (std::size_t j = 0; j < sites; ++j) {
        const auto eig = eigenspinors(grid.k(j), p);
        const Spinor& chi = branch == 1 ? eig.plus : eig.minus;
        const cplx a = std::conj(chi[0]) * hat[2 * j] + std::conj(chi[1]) * hat[2 * j + 1];
        hat[2 * j] = a * chi[0];
        hat[2 * j + 1] = a * chi[1];
    }
    FieldState out(sites, std::vector<cplx>(2 * sites), s.origin());
    fft.backward(hat.data(), out.amps().data());
    const double inv = 1.0 / double(sites);
    for (auto& z : out.amps()) z *= inv;
    return out;
}

std::pair<double, double> branch_populations(const FieldState& s, const AutomatonParams& p) {
    const std::size_t sites = s.sites();
    const MomentumGrid grid(sites);
    RingFft fft(sites);
    std::vector<cplx> hat(2 * sites);
    fft.forward(s.amps().data(), hat.data());
    double plus = 0.0, minus = 0.0;
    for (std::size_t j = 0; j < sites; ++j) {
        const auto eig = eigenspinors(grid.k(j), p);
        plus += std::norm(std::conj(eig.plus[0]) * hat[2 * j] +
                          std::conj(eig.plus[1]) * hat[2 * j + 1]);
        minus += std::norm(std::conj(eig.minus[0]) * hat[2 * j] +
                           std::conj(eig.minus[1]) * hat[2 * j + 1]);
    }
    const double inv = 1.0 / double(sites);
    return {plus * inv, minus * inv};
}

} // namespace dqca

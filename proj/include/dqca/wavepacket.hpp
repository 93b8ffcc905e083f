#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include "dqca/params.hpp"
#include "dqca/state.hpp"

namespace dqca {

// Gaussian packet in momentum space, G(k) = exp(-(k-k0)^2 / (2 sigma^2))
// evaluated on all N modes (circular distance k-k0), each mode carrying
// c_plus * spinor_plus(k) + c_minus * spinor_minus(k) and the center phase
// e^{-i k x0}. |c_plus|^2 + |c_minus|^2 must equal 1.
struct WavepacketSpec {
    double k0 = 0.0;
    double sigma = 0.025;
    std::complex<double> c_plus = 1.0;
    std::complex<double> c_minus = 0.0;
    double x0 = 0.0;
};

// Assembles and normalizes the packet by inverse DFT. Throws
// resolution_error when sigma < 8 * (2 pi / N), leakage_error when the
// constructed packet already violates the edge guard.
FieldState build_packet(std::size_t sites, const AutomatonParams& p, const WavepacketSpec& spec);

// Projects onto one dispersion branch (+1 or -1) mode by mode. Exact:
// applying both projectors reassembles the state to round-off.
FieldState branch_project(const FieldState& s, const AutomatonParams& p, int branch);

// (|<+|psi>|^2, |<-|psi>|^2); sums to norm^2.
std::pair<double, double> branch_populations(const FieldState& s, const AutomatonParams& p);

} // namespace dqca

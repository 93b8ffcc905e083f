#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dqca/params.hpp"

namespace dqca {

using cplx = std::complex<double>;

// Two-component field on a periodic ring of N sites. Amplitudes are stored
// interleaved per site: amps[2x] = psi_r(x), amps[2x+1] = psi_l(x), which
// keeps the stencil update cache-local.
class FieldState {
public:
    FieldState() = default;
    // Zero state on a ring of `sites` sites (must be even and >= 4).
    explicit FieldState(std::size_t sites, std::int64_t origin = 0);
    // Adopts existing amplitudes; amps.size() must equal 2*sites.
    FieldState(std::size_t sites, std::vector<cplx> amps, std::int64_t origin = 0);

    std::size_t sites() const noexcept { return sites_; }
    std::int64_t origin() const noexcept { return origin_; }
    void set_origin(std::int64_t o) noexcept { origin_ = o; }

    std::vector<cplx>& amps() noexcept { return amps_; }
    const std::vector<cplx>& amps() const noexcept { return amps_; }

    cplx& r(std::size_t x) { return amps_[2 * x]; }
    cplx& l(std::size_t x) { return amps_[2 * x + 1]; }
    const cplx& r(std::size_t x) const { return amps_[2 * x]; }
    const cplx& l(std::size_t x) const { return amps_[2 * x + 1]; }

    double norm() const;
    // Scales the state to unit norm; throws on (near-)zero states.
    void renormalize();

private:
    std::size_t sites_ = 0;
    std::int64_t origin_ = 0;
    std::vector<cplx> amps_;
};

// <a|b>, conjugate-linear in the first argument. Shapes must match.
cplx inner_product(const FieldState& a, const FieldState& b);

// Per-site probability density |psi_r|^2 + |psi_l|^2.
std::vector<double> density(const FieldState& s);

// Probability mass inside the guard band at the ring seam: the outer
// `fraction` of sites, split evenly across both ends of the index range.
double guard_band_probability(const FieldState& s, double fraction = 0.05);

} // namespace dqca

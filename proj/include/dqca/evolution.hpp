#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dqca/params.hpp"
#include "dqca/state.hpp"

namespace dqca {

// Static scalar phase potential phi(x) in [0, 2 pi), applied before the hop:
// one full step is U_phi = U * diag(e^{-i phi(x)}).
class PotentialProfile {
public:
    static PotentialProfile zero(std::size_t sites);
    // phi(x) = phi for x >= edge, 0 otherwise; phi is reduced mod 2 pi.
    static PotentialProfile step(std::size_t sites, double phi, std::size_t edge);
    static PotentialProfile from_phases(std::vector<double> phases);

    std::size_t sites() const noexcept { return phase_.size(); }
    const std::vector<double>& phase() const noexcept { return phase_; }
    bool is_zero() const noexcept { return zero_; }
    // Interleaved complex factors e^{-i phi(x)}, built lazily.
    const std::vector<cplx>& factors() const;

private:
    PotentialProfile() = default;
    std::vector<double> phase_;
    bool zero_ = true;
    mutable std::vector<cplx> factors_;
};

enum class EvolveBackend { stencil, spectral };

struct EvolveOptions {
    EvolveBackend backend = EvolveBackend::stencil;
    std::size_t observe_stride = 1;
    double guard_threshold = 1e-8;
    double guard_fraction = 0.05;
    bool guard_enabled = true;
};

// Called at step 0 (initial state) and after every observe_stride-th step.
using Observer = std::function<void(std::size_t step, const FieldState&)>;

// One position-space step; supports any potential. O(N).
void step_stencil(FieldState& s, const AutomatonParams& p, const PotentialProfile& pot);

// One momentum-space step (DFT, per-mode walk-matrix multiply, inverse DFT).
// Free evolution only.
void step_spectral(FieldState& s, const AutomatonParams& p);

// Advances `steps` unit steps, invoking observers and checking the
// edge-leakage guard at every observation point. Throws unsupported_error
// for the spectral backend with a nonzero potential, leakage_error (naming
// the step) when the guard trips.
void evolve(FieldState& s, const AutomatonParams& p, const PotentialProfile& pot,
            std::size_t steps, const EvolveOptions& opt = {},
            const std::vector<Observer>& observers = {});

} // namespace dqca

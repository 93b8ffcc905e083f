#include "dqca/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dqca/errors.hpp"
#include "dqca/fft.hpp"
#include "dqca/kernels.hpp"
#include "dqca/spectral.hpp"

namespace dqca {

namespace {

double reduce_phase(double phi) {
    constexpr double tau = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, tau);
    if (r < 0.0) r += tau;
    return r;
}

const double* flat(const std::vector<cplx>& v) {
    return reinterpret_cast<const double*>(v.data());
}
double* flat(std::vector<cplx>& v) { return reinterpret_cast<double*>(v.data()); }

// Per-mode walk matrices with the inverse-transform 1/N folded in,
// 8 doubles per mode row-major.
std::vector<double> mode_matrices(std::size_t sites, const AutomatonParams& p) {
    const MomentumGrid grid(sites);
    std::vector<double> mats(8 * sites);
    const double inv = 1.0 / double(sites);
    for (std::size_t j = 0; j < sites; ++j) {
        const Mat2 u = walk_matrix(grid.k(j), p);
        for (std::size_t e = 0; e < 4; ++e) {
            mats[8 * j + 2 * e] = u[e].real() * inv;
            mats[8 * j + 2 * e + 1] = u[e].imag() * inv;
        }
    }
    return mats;
}

} // namespace

PotentialProfile PotentialProfile::zero(std::size_t sites) {
    PotentialProfile p;
    p.phase_.assign(sites, 0.0);
    p.zero_ = true;
    return p;
}

PotentialProfile PotentialProfile::step(std::size_t sites, double phi, std::size_t edge) {
    if (edge >= sites)
        throw std::invalid_argument("potential edge must lie inside the ring");
    const double r = reduce_phase(phi);
    PotentialProfile p;
    p.phase_.assign(sites, 0.0);
    std::fill(p.phase_.begin() + static_cast<std::ptrdiff_t>(edge), p.phase_.end(), r);
    p.zero_ = r == 0.0;
    return p;
}

PotentialProfile PotentialProfile::from_phases(std::vector<double> phases) {
    PotentialProfile p;
    p.phase_ = std::move(phases);
    for (double& v : p.phase_) v = reduce_phase(v);
    p.zero_ = std::all_of(p.phase_.begin(), p.phase_.end(), [](double v) { return v == 0.0; });
    return p;
}

const std::vector<cplx>& PotentialProfile::factors() const {
    if (factors_.empty() && !phase_.empty()) {
        factors_.resize(phase_.size());
        for (std::size_t x = 0; x < phase_.size(); ++x)
            factors_[x] = std::polar(1.0, -phase_[x]);
    }
    return factors_;
}

void step_stencil(FieldState& s, const AutomatonParams& p, const PotentialProfile& pot) {
    if (pot.sites() != s.sites())
        throw std::invalid_argument("potential and state ring sizes differ");
    thread_local std::vector<cplx> scratch;
    scratch.resize(s.amps().size());
    const auto& k = kernels::ops();
    if (pot.is_zero())
        k.step_free(flat(s.amps()), flat(scratch), s.sites(), p.n, p.m);
    else
        k.step_phase(flat(s.amps()), flat(pot.factors()), flat(scratch), s.sites(), p.n, p.m);
    s.amps().swap(scratch);
}

void step_spectral(FieldState& s, const AutomatonParams& p) {
    thread_local std::unique_ptr<RingFft> fft;
    thread_local std::vector<double> mats;
    thread_local double mats_m = -1.0;
    if (!fft || fft->sites() != s.sites()) {
        fft = std::make_unique<RingFft>(s.sites());
        mats_m = -1.0;
    }
    if (mats_m != p.m) {
        mats = mode_matrices(s.sites(), p);
        mats_m = p.m;
    }
    thread_local std::vector<cplx> hat;
    hat.resize(s.amps().size());
    fft->forward(s.amps().data(), hat.data());
    kernels::ops().mode_apply(flat(hat), mats.data(), s.sites());
    fft->backward(hat.data(), s.amps().data());
}

void evolve(FieldState& s, const AutomatonParams& p, const PotentialProfile& pot,
            std::size_t steps, const EvolveOptions& opt, const std::vector<Observer>& observers) {
    if (opt.backend == EvolveBackend::spectral && !pot.is_zero())
        throw unsupported_error("spectral stepping supports free evolution only");
    if (pot.sites() != s.sites())
        throw std::invalid_argument("potential and state ring sizes differ");
    if (opt.observe_stride == 0)
        throw std::invalid_argument("observe_stride must be positive");

    auto observe = [&](std::size_t t) {
        if (opt.guard_enabled) {
            const double mass = guard_band_probability(s, opt.guard_fraction);
            if (mass > opt.guard_threshold) throw leakage_error(t, mass, opt.guard_threshold);
        }
        for (const auto& obs : observers) obs(t, s);
    };

    observe(0);
    if (steps == 0) return;

    if (opt.backend == EvolveBackend::stencil) {
        for (std::size_t t = 1; t <= steps; ++t) {
            step_stencil(s, p, pot);
            if (t % opt.observe_stride == 0) observe(t);
        }
        return;
    }

    RingFft fft(s.sites());
    const std::vector<double> mats = mode_matrices(s.sites(), p);
    std::vector<cplx> hat(s.amps().size());
    for (std::size_t t = 1; t <= steps; ++t) {
        fft.forward(s.amps().data(), hat.data());
        kernels::ops().mode_apply(flat(hat), mats.data(), s.sites());
        fft.backward(hat.data(), s.amps().data());
        if (t % opt.observe_stride == 0) observe(t);
    }
}

} // namespace dqca

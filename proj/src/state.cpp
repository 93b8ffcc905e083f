#include "dqca/state.hpp"

#include <cmath>
#include <stdexcept>

#include "dqca/kernels.hpp"

namespace dqca {

namespace {

void check_sites(std::size_t sites) {
    if (sites < 4 || sites % 2 != 0)
        throw std::invalid_argument("ring size must be even and >= 4, got " +
                                    std::to_string(sites));
}

const double* flat(const std::vector<cplx>& amps) {
    return reinterpret_cast<const double*>(amps.data());
}

} // namespace

FieldState::FieldState(std::size_t sites, std::int64_t origin)
    : sites_(sites), origin_(origin), amps_(2 * sites) {
    check_sites(sites);
}

FieldState::FieldState(std::size_t sites, std::vector<cplx> amps, std::int64_t origin)
    : sites_(sites), origin_(origin), amps_(std::move(amps)) {
    check_sites(sites);
    if (amps_.size() != 2 * sites)
        throw std::invalid_argument("amplitude buffer must hold 2*sites values");
}

double FieldState::norm() const {
    return std::sqrt(kernels::ops().norm_sq(flat(amps_), amps_.size()));
}

void FieldState::renormalize() {
    const double nrm = norm();
    if (!(nrm > 1e-154))
        throw std::invalid_argument("cannot normalize a (near-)zero state");
    kernels::ops().scale(reinterpret_cast<double*>(amps_.data()), amps_.size(), 1.0 / nrm);
}

cplx inner_product(const FieldState& a, const FieldState& b) {
    if (a.sites() != b.sites())
        throw std::invalid_argument("inner product of mismatched ring sizes");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.amps().size(); ++i)
        acc += std::conj(a.amps()[i]) * b.amps()[i];
    return acc;
}

std::vector<double> density(const FieldState& s) {
    std::vector<double> rho(s.sites());
    kernels::ops().density(flat(s.amps()), rho.data(), s.sites());
    return rho;
}

double guard_band_probability(const FieldState& s, double fraction) {
    if (!(fraction >= 0.0) || !(fraction <= 0.5))
        throw std::invalid_argument("guard fraction must lie in [0, 0.5]");
    const std::size_t n = s.sites();
    const std::size_t band = static_cast<std::size_t>(std::ceil(fraction * double(n) / 2.0));
    double mass = 0.0;
    for (std::size_t x = 0; x < band; ++x) {
        mass += std::norm(s.r(x)) + std::norm(s.l(x));
        mass += std::norm(s.r(n - 1 - x)) + std::norm(s.l(n - 1 - x));
    }
    return mass;
}

} // namespace dqca

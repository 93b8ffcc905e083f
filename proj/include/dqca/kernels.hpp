#pragma once

#include <cstddef>
#include <string>

namespace dqca::kernels {

// All kernels operate on interleaved complex doubles (z[2i] = Re, z[2i+1] = Im).
// A state of N sites occupies 4N doubles: [Re r(x), Im r(x), Re l(x), Im l(x)].
//
// step_free / step_phase implement one unit step of the automaton,
//   psi_r'(x) = n d(x+1) psi_r(x+1) - i m d(x) psi_l(x)
//   psi_l'(x) = -i m d(x) psi_r(x) + n d(x-1) psi_l(x-1)
// on the periodic ring (d == 1 for the free kernel; dphase holds the
// interleaved complex factors e^{-i phi(x)}). in and out must not alias.
//
// mode_apply multiplies each momentum mode (rhat_j, lhat_j) by a 2x2 matrix
// stored row-major as 8 doubles per mode in `mats`.
struct Ops {
    void (*step_free)(const double* in, double* out, std::size_t sites, double n, double m);
    void (*step_phase)(const double* in, const double* dphase, double* out, std::size_t sites,
                       double n, double m);
    void (*mode_apply)(double* hat, const double* mats, std::size_t modes);
    double (*norm_sq)(const double* z, std::size_t count);
    void (*density)(const double* amps, double* rho, std::size_t sites);
    void (*scale)(double* z, std::size_t count, double s);
};

enum class Backend { scalar, avx2 };

// Backend chosen at startup from CPU capabilities (AVX2 + FMA required for
// the avx2 table). force() overrides for tests; throws unsupported_error if
// the requested backend is unavailable on this machine.
Backend active();
void force(Backend b);
bool available(Backend b);
std::string name(Backend b);

const Ops& ops();
const Ops& ops(Backend b);

} // namespace dqca::kernels

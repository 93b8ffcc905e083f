#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "dqca/evolution.hpp"
#include "dqca/params.hpp"
#include "dqca/wavepacket.hpp"

namespace dqca {

enum class Regime { propagating, evanescent, klein };
std::string regime_name(Regime r);

// Transmitted mode behind a step of height phi for a rightward incident wave
// of momentum k in (0, pi). The reduced frequency is
// omega' = omega(k) - phi mapped into (-pi, pi]; the mode is propagating
// (positive branch, k' in (0,pi)) for omega' inside the band
// (arccos n, pi - arccos n), klein (negative branch, k' in (-pi,0)) for
// omega' in the mirrored negative band, evanescent otherwise. Within
// edge_margin of a band edge the boundary-inclusive evanescent label wins.
struct TransmittedMode {
    Regime regime;
    double k_prime;      // signed real part; for evanescent 0 or pi
    double kappa;        // imaginary magnitude, nonzero only when evanescent
    double omega;        // omega(k)
    double omega_prime;  // reduced transmitted frequency
};
TransmittedMode transmitted_momentum(double k, double phi, const AutomatonParams& p,
                                     double edge_margin = 1e-6);

// Reflection/transmission amplitudes from matching the piecewise eigenvector
// at the step. The reported gamma carries the xi = 0 phase convention; the
// assembled region-II wavefunction is e^{i phi} gamma e^{i k' x} chi(k').
// Throws regime_error in the evanescent window, degeneracy_error for
// grazing incidence (v(k) ~ 0).
struct MatchingAmplitudes {
    std::complex<double> beta;
    std::complex<double> gamma;
};
MatchingAmplitudes matching_amplitudes(double k, double phi, const AutomatonParams& p);

struct ScatteringSolution {
    double m;
    double k;
    double phi;
    Regime regime;
    double k_prime;  // signed; for evanescent rows holds kappa
    double omega_prime;
    double v_in;
    double v_out;  // transmitted group velocity (>= 0); 0 when evanescent
    std::complex<double> beta;
    std::complex<double> gamma;
    double R;
    double T;  // |gamma|^2 v_out / v_in; R + T = 1
};
ScatteringSolution coefficients(double k, double phi, const AutomatonParams& p);

// Max pointwise residual of U_phi Phi - e^{-i omega} Phi for the assembled
// piecewise eigenvector on an open window of +-half_window sites around the
// step, interior sites only. Certifies beta/gamma/k' independently of the
// closed forms.
double eigenvector_residual(double k, double phi, const AutomatonParams& p,
                            std::size_t half_window = 64);

struct ScanResult {
    double m;
    std::vector<double> k_grid;
    std::vector<double> phi_grid;
    std::vector<ScatteringSolution> cells;  // row-major, k outer, phi inner
};
ScanResult scan(const AutomatonParams& p, const std::vector<double>& k_grid,
                const std::vector<double>& phi_grid);

// Width of the contiguous R >= 1 - 1e-9 plateau containing phi = omega(k),
// one entry per k row; expected width is 2 arccos(n).
struct PlateauSummary {
    double k;
    double width;
    double expected;
    std::size_t cells;
};
std::vector<PlateauSummary> plateau_widths(const ScanResult& scan);

struct DynamicSpec {
    std::size_t sites = 4096;
    WavepacketSpec packet;        // c_plus = 1 branch packet by default
    double phi = 0.0;
    std::size_t barrier = 0;      // first site inside the potential
    std::size_t steps = 500;
    EvolveOptions evolve;
    std::size_t trace_stride = 1;
    // When nonzero, on_snapshot fires at observation times divisible by
    // snapshot_stride (including step 0).
    std::size_t snapshot_stride = 0;
    std::function<void(std::size_t step, const FieldState&)> on_snapshot;
};

struct DynamicResult {
    double R_measured;   // probability strictly left of the barrier at the end
    double T_measured;
    double R_analytic;   // at the packet's central momentum
    double T_analytic;
    double v_out_measured;  // NaN when no transmitted lobe exists
    double v_out_analytic;
    std::size_t steps;
    // Per-observation diagnostics, trace_stride apart.
    std::vector<double> t, mass_left, mass_right, centroid_left, centroid_right;
};

// Evolves the packet against the step potential and measures R/T by spatial
// partition. Throws inconclusive_error when the lobes have not separated by
// at least 6 combined r.m.s. widths at the final step.
DynamicResult dynamic_scatter(const DynamicSpec& spec, const AutomatonParams& p);

} // namespace dqca

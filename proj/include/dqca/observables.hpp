#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dqca/params.hpp"
#include "dqca/state.hpp"
#include "dqca/wavepacket.hpp"

namespace dqca {

// Mean position (site index plus ring origin). Checks the edge-leakage
// guard first so a wrapped packet cannot silently fold the mean.
double position_mean(const FieldState& s, double guard_threshold = 1e-8,
                     double guard_fraction = 0.05);

// Mean quasi-momentum over [-pi, pi), computed from the DFT spectrum.
double momentum_mean(const FieldState& s);

struct TrajectoryTrace {
    std::vector<double> t;
    std::vector<double> x_mean;
    std::vector<double> p_mean;
};

// Interference weight z(k) = m cos(omega) / sin^2(omega).
double zitter_z(double k, const AutomatonParams& p);

struct ZitterPrediction {
    double frequency;        // cycles per step, omega(k0)/pi
    double drift;            // (|c+|^2 - |c-|^2) v(k0)
    double shift;            // Im(conj(c+) c-) <z>_{|G|^2}
    double amplitude_bound;  // 2/m + 2/m^2
};
ZitterPrediction zitter_predict(std::size_t sites, const AutomatonParams& p,
                                const WavepacketSpec& spec);

struct ZitterMeasurement {
    double amplitude;       // largest detrended oscillation extremum
    double frequency;       // periodogram peak, cycles per step
    double shift;           // asymptotic mean of the detrended residual
    double decay_exponent;  // log-log slope of extrema amplitudes
    std::size_t extrema_count;
};

// Analyzes x_mean(t). Detrends with the supplied analytic drift when given,
// otherwise with a least-squares linear fit. The decay fit uses extrema in
// [fit_t_min, fit_t_max]. Throws signal_error when no oscillation rises
// above the noise floor.
ZitterMeasurement zitter_measure(const TrajectoryTrace& trace,
                                 std::optional<double> drift = std::nullopt,
                                 double fit_t_min = 100.0, double fit_t_max = 2000.0,
                                 double noise_floor = 1e-6);

struct BoundCheck {
    double max_residual;
    double bound;
    bool ok;
};
// max_t |x(t) - x(0) - drift t| against the amplitude bound 2/m + 2/m^2.
BoundCheck zitter_bound_check(const TrajectoryTrace& trace, double drift, double bound);

} // namespace dqca

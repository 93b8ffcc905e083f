#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dqca {

// Probability mass reached the guard band at the ring seam; carries the step
// at which the guard tripped.
class leakage_error : public std::runtime_error {
public:
    leakage_error(std::size_t step, double mass, double threshold)
        : std::runtime_error("edge-leakage guard tripped at step " + std::to_string(step) +
                             ": band probability " + std::to_string(mass) + " exceeds " +
                             std::to_string(threshold)),
          step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Operation requested outside its regime of validity (e.g. matching
// amplitudes in the evanescent window).
class regime_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Spectrum degenerate at the requested momentum (massless automaton only).
class degeneracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Backend/configuration combination that the implementation refuses
// (e.g. spectral stepping with a nonzero potential).
class unsupported_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Trace carries no measurable oscillation above the noise floor.
class signal_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A dynamic measurement could not be completed (e.g. lobes not separated
// by the end of the run).
class inconclusive_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested packet cannot be resolved on the given momentum grid.
class resolution_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dqca

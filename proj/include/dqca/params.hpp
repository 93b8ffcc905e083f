#pragma once

#include <cmath>
#include <stdexcept>

namespace dqca {

// Unit-step parameters of the one-dimensional Dirac automaton.
// The couplings satisfy n^2 + m^2 = 1 exactly; n is derived from the mass.
struct AutomatonParams {
    double m = 0.0;
    double n = 1.0;

    // Validated factory: requires 0 < m <= 1. Aggregate construction stays
    // available for tests probing the massless edge of individual formulas.
    static AutomatonParams from_mass(double mass) {
        if (!(mass > 0.0) || !(mass <= 1.0))
            throw std::invalid_argument("mass must satisfy 0 < m <= 1, got " + std::to_string(mass));
        return AutomatonParams{mass, std::sqrt(1.0 - mass * mass)};
    }
};

} // namespace dqca

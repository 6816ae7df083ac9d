#pragma once

#include <stdexcept>

namespace dtripod {

// Minimum eigenvalue of the group-velocity matrix (v-) breached the
// singularity tolerance: the medium degenerated to the double-Lambda limit.
struct DegenerateVelocity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The Rabi matrix is not invertible (|det| below tolerance), so the
// detuning matrix similarity transform does not exist.
struct SingularRabi : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The matrix inverted during the exact monochromatic elimination is
// ill-conditioned.
struct SingularElimination : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested detuning condition has no solution (coinciding
// eigen-velocities).
struct NoSolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dtripod

#pragma once

#include <vector>

#include "qbus/space.hpp"

namespace qbus {

/// |<b|a>|^2 (states are used as given; normalize first if needed).
double fidelity(const StateVector& a, const StateVector& b);
/// <b|rho|b>
double fidelity(const DensityMatrix& rho, const StateVector& b);

/// Overlap maximized over an independent phase for every nonzero amplitude of
/// the target: (sum_i |t_i| |psi_i|)^2. Insensitive to the Rabi phases (i, -i,
/// Stark phases) that protocol steps attach to each branch.
double phase_corrected_fidelity(const StateVector& state, const StateVector& target);

/// Wootters concurrence of a two-qubit density matrix (4x4).
double concurrence(const DensityMatrix& rho);
/// Pure-state concurrence |<psi|sigma_y (x) sigma_y|psi*>| for a 4-dimensional state.
double concurrence(const StateVector& psi);

/// Trace out every factor not listed in `keep`. Factors are the qubits in
/// order (groups in the symmetric representation) followed by the boson.
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);

}  // namespace qbus

#pragma once

#include "qbus/space.hpp"

namespace qbus::ops {

// Sparse operators on computational-basis spaces. Built by walking the basis,
// so they are independent of the closed-form Dicke-ladder elements in models.

SparseOp identity(const SpaceSpec& sp);
SparseOp sigma_plus(const SpaceSpec& sp, int qubit);   // |e><g|
SparseOp sigma_minus(const SpaceSpec& sp, int qubit);  // |g><e|
SparseOp sigma_z(const SpaceSpec& sp, int qubit);      // |e><e| - |g><g|
SparseOp excited_projector(const SpaceSpec& sp, int qubit);
SparseOp annihilation(const SpaceSpec& sp);
SparseOp number(const SpaceSpec& sp);
/// Sum of sigma_plus over qubits [first, first + count).
SparseOp collective_raise(const SpaceSpec& sp, int first, int count);
SparseOp collective_lower(const SpaceSpec& sp, int first, int count);
/// sum_j |e_j><e_j| + a^dagger a
SparseOp excitation_number(const SpaceSpec& sp);

}  // namespace qbus::ops

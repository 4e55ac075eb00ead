#pragma once

#include <compare>
#include <map>
#include <vector>

#include "qbus/space.hpp"

namespace qbus {

/// |D_q^M>: M qubits sharing q excitations symmetrically.
struct DickeLabel {
  int M = 1;
  int q = 0;

  DickeLabel() = default;
  DickeLabel(int qubits, int excitations);

  auto operator<=>(const DickeLabel&) const = default;
};

/// Joint ladder point |D_k^N>|D_q^M> of two qubit groups.
struct DickePair {
  DickeLabel left;
  DickeLabel right;

  DickePair() = default;
  DickePair(DickeLabel l, DickeLabel r) : left(l), right(r) {}
  DickePair(int N, int k, int M, int q) : left(N, k), right(M, q) {}

  auto operator<=>(const DickePair&) const = default;
};

double binomial(int n, int k);

/// Explicit computational-basis Dicke state on one group of M qubits.
StateVector dicke_state(DickeLabel label);

struct DickeDecomposition {
  std::map<DickePair, cplx> coefficients;
  double leakage = 0.0;  // 1 - sum |coefficient|^2, clamped to [0, 1]
};

/// Overlaps <D_k^N, D_q^M|psi> for all (k, q). A boson factor is projected on |0> first.
DickeDecomposition dicke_decompose(const StateVector& state, int N, int M);

/// Projection of a computational-basis state onto the symmetric (Dicke-tuple)
/// basis of its groups. The boson factor is kept. Returns the unnormalized
/// symmetric state; its norm deficit is the weight outside the symmetric sector.
StateVector to_symmetric(const StateVector& state);

/// Inverse embedding of a symmetric-representation state into the computational basis.
StateVector to_computational(const StateVector& state);

}  // namespace qbus

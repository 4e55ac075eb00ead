#pragma once

#include <cstdint>

#include "qbus/space.hpp"

namespace qbus {

enum class Outcome { Ground, Excited };

const char* to_string(Outcome o);

struct MeasurementResult {
  Outcome outcome;
  StateVector collapsed;
  double probability;
};

struct Projection {
  StateVector collapsed;  // renormalized; the input itself when probability is 0
  double probability;
};

struct MixedProjection {
  DensityMatrix collapsed;
  double probability;
};

/// Probability that `qubit` is found excited. In the symmetric representation
/// the qubit must be the only member of its group.
double excitation_probability(const StateVector& state, int qubit);

/// Deterministic projection on one outcome (heralding in test mode).
Projection project_qubit(const StateVector& state, int qubit, Outcome outcome);
MixedProjection project_qubit(const DensityMatrix& rho, int qubit, Outcome outcome);

/// Born-rule sample using a generator seeded with `seed`; no hidden state.
MeasurementResult measure_qubit(const StateVector& state, int qubit, std::uint64_t seed);

/// Uniform double in [0, 1) from a seeded 64-bit Mersenne twister.
double seeded_uniform(std::uint64_t seed);

}  // namespace qbus

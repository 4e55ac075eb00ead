#include "qbus/measure.hpp"

#include <random>
#include <stdexcept>

namespace qbus {

const char* to_string(Outcome o) { return o == Outcome::Excited ? "e" : "g"; }

namespace {

// Mask over basis indices: true where `qubit` is excited.
std::vector<bool> excited_mask(const SpaceSpec& sp, int qubit) {
  if (qubit < 0 || qubit >= sp.num_qubits()) throw std::out_of_range("qubit index outside space");
  std::vector<bool> mask(sp.dim());
  if (sp.representation() == Representation::Computational) {
    for (std::size_t i = 0; i < sp.dim(); ++i) mask[i] = sp.excited(i, qubit);
    return mask;
  }
  int group = 0;
  int offset = 0;
  while (offset + sp.groups()[static_cast<std::size_t>(group)] <= qubit) offset += sp.groups()[static_cast<std::size_t>(group++)];
  if (sp.groups()[static_cast<std::size_t>(group)] != 1) {
    throw std::invalid_argument("symmetric representation can only measure a qubit that forms its own group");
  }
  for (std::size_t i = 0; i < sp.dim(); ++i) mask[i] = sp.symmetric_excitations(i)[static_cast<std::size_t>(group)] == 1;
  return mask;
}

}  // namespace

double excitation_probability(const StateVector& state, int qubit) {
  const auto mask = excited_mask(state.space(), qubit);
  double p = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) p += std::norm(state[i]);
  }
  return p / (state.norm() * state.norm());
}

Projection project_qubit(const StateVector& state, int qubit, Outcome outcome) {
  const auto mask = excited_mask(state.space(), qubit);
  const bool want = outcome == Outcome::Excited;
  Vec v = state.amplitudes();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != want) v(static_cast<Eigen::Index>(i)) = 0.0;
  }
  const double total = state.norm() * state.norm();
  const double p = v.squaredNorm() / total;
  if (p == 0.0) return {state, 0.0};
  return {StateVector(state.space(), v / v.norm()), p};
}

MixedProjection project_qubit(const DensityMatrix& rho, int qubit, Outcome outcome) {
  const auto mask = excited_mask(rho.space(), qubit);
  const bool want = outcome == Outcome::Excited;
  Mat m = rho.matrix();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != want) {
      m.row(static_cast<Eigen::Index>(i)).setZero();
      m.col(static_cast<Eigen::Index>(i)).setZero();
    }
  }
  const double p = m.trace().real() / rho.trace();
  if (p <= 0.0) return {rho, 0.0};
  return {DensityMatrix(rho.space(), m / m.trace().real()), p};
}

double seeded_uniform(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

MeasurementResult measure_qubit(const StateVector& state, int qubit, std::uint64_t seed) {
  const double pe = excitation_probability(state, qubit);
  const Outcome outcome = seeded_uniform(seed) < pe ? Outcome::Excited : Outcome::Ground;
  auto proj = project_qubit(state, qubit, outcome);
  return {outcome, std::move(proj.collapsed), proj.probability};
}

}  // namespace qbus

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbus/integrator.hpp"
#include "qbus/models.hpp"
#include "qbus/space.hpp"

namespace qbus {

template <class State>
struct EvolutionResult {
  std::vector<double> times;
  std::vector<State> states;
  std::string engine;
  double max_drift = 0.0;  // norm drift (pure) or trace drift (mixed) over the samples
  OdeStats stats;
};

using PureEvolution = EvolutionResult<StateVector>;
using MixedEvolution = EvolutionResult<DensityMatrix>;

/// Samples defaulting to {t_final} when empty.
std::vector<double> resolve_samples(double t_final, std::vector<double> sample_times);

/// psi(t) = exp(-i H t) psi0 via Hermitian eigendecomposition. H must be static.
PureEvolution evolve_exact(const HamiltonianSpec& h, const StateVector& psi0, double t_final,
                           std::vector<double> sample_times = {});

/// Diagonal A with H(t) = exp(iAt) H(0) exp(-iAt), when the model has one (the
/// effective Dicke model: A = delta * q). Checked against every generator term.
std::optional<Eigen::VectorXd> corotating_generator(const HamiltonianSpec& h);

/// psi(t) = exp(iAt) exp(-i (H(0) + A) t) psi0 with A from corotating_generator.
/// Exact for any duration; throws std::invalid_argument when no such frame exists.
PureEvolution evolve_corotating(const HamiltonianSpec& h, const StateVector& psi0, double t_final,
                                std::vector<double> sample_times = {});

struct AdaptiveOptions {
  double tol = 1e-10;
  /// 0 selects 0.05 / (fastest phase rate of the generator).
  double max_step = 0.0;
  bool parallel = true;
};

/// Adaptive Dormand-Prince integration of i psi' = H(t) psi.
PureEvolution evolve_tdep(const HamiltonianSpec& h, const StateVector& psi0, double t_final,
                          const AdaptiveOptions& options = {}, std::vector<double> sample_times = {});

struct LindbladOptions {
  double tol = 1e-10;
  double max_step = 0.0;
  double positivity_tol = 1e-6;
  double trace_tol = 1e-8;
  bool parallel = true;
};

/// Dense master-equation solver for rho' = -i[H, rho] + sum D[L] rho.
MixedEvolution evolve_lindblad(const HamiltonianSpec& h, const LindbladSpec& diss, const DensityMatrix& rho0,
                               double t_final, const LindbladOptions& options = {},
                               std::vector<double> sample_times = {});

/// Cached eigendecomposition of a static Hamiltonian for repeated propagation.
class ExactPropagator {
 public:
  explicit ExactPropagator(const HamiltonianSpec& h);
  StateVector operator()(const StateVector& psi0, double t) const;
  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  SpaceSpec space_;
  Eigen::VectorXd energies_;
  Mat vectors_;
};

}  // namespace qbus

#pragma once

#include <span>
#include <vector>

#include "qbus/models.hpp"

// Right-hand sides of the Schroedinger and Lindblad equations. The top-level
// functions are the OpenMP kernels used by the engines; `serial` holds
// straightforward dense reference versions kept for tests and benchmarks.
namespace qbus::kernels {

/// Dimension below which the OpenMP kernels run single-threaded.
inline constexpr Eigen::Index kParallelThreshold = 32;

/// dy = -i H(t) y
void schrodinger_rhs(std::span<const GeneratorTerm> terms, double t, const Vec& y, Vec& dy);

/// Precomputed pieces of the Lindblad generator.
struct LindbladGenerator {
  std::vector<GeneratorTerm> hamiltonian;
  std::vector<SparseOp> jumps;  // sqrt(rate) * L
  SparseOp half_decay;          // (1/2) sum_k L_k^dagger L_k
};

LindbladGenerator make_lindblad_generator(const HamiltonianSpec& h, const std::vector<JumpOperator>& jumps);

/// drho = -i [H(t), rho] + sum_k (L rho L^dagger - 1/2 {L^dagger L, rho}); rho must be Hermitian.
void lindblad_rhs(const LindbladGenerator& gen, double t, const Mat& rho, Mat& drho);

/// Y += alpha * A * X, parallel over columns of X.
void sparse_dense_accumulate(const SparseOp& a, cplx alpha, const Mat& x, Mat& y);

namespace serial {

void schrodinger_rhs(std::span<const GeneratorTerm> terms, double t, const Vec& y, Vec& dy);
void lindblad_rhs(const LindbladGenerator& gen, double t, const Mat& rho, Mat& drho);

}  // namespace serial

}  // namespace qbus::kernels

#include "qbus/dicke.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qbus {

DickeLabel::DickeLabel(int qubits, int excitations) : M(qubits), q(excitations) {
  if (M < 1) throw std::domain_error("Dicke label needs at least one qubit");
  if (q < 0 || q > M) throw std::domain_error("Dicke excitation number out of range");
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

StateVector dicke_state(DickeLabel label) {
  auto space = SpaceSpec::qubits({label.M});
  Vec v = Vec::Zero(static_cast<Eigen::Index>(space.dim()));
  const double amp = 1.0 / std::sqrt(binomial(label.M, label.q));
  for (std::size_t bits = 0; bits < space.dim(); ++bits) {
    if (std::popcount(bits) == label.q) v(static_cast<Eigen::Index>(bits)) = amp;
  }
  return StateVector(std::move(space), std::move(v));
}

namespace {

// Excitation count of each group for a computational-basis qubit string.
std::vector<int> group_counts(std::size_t bits, const std::vector<int>& groups, int total) {
  std::vector<int> counts(groups.size(), 0);
  int shift = total;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    shift -= groups[g];
    const std::size_t mask = (std::size_t{1} << groups[g]) - 1;
    counts[g] = std::popcount((bits >> shift) & mask);
  }
  return counts;
}

}  // namespace

StateVector to_symmetric(const StateVector& state) {
  const auto& sp = state.space();
  if (sp.representation() != Representation::Computational) throw std::invalid_argument("state is already symmetric");
  if (sp.has_boson()) throw std::invalid_argument("to_symmetric: project out the boson mode first");
  const auto& groups = sp.groups();
  auto sym_groups = SpaceSpec::symmetric(groups);
  Vec out = Vec::Zero(static_cast<Eigen::Index>(sym_groups.dim()));
  const int total = sp.num_qubits();
  for (std::size_t bits = 0; bits < sp.qubit_dim(); ++bits) {
    const auto counts = group_counts(bits, groups, total);
    double norm = 1.0;
    for (std::size_t g = 0; g < groups.size(); ++g) norm *= binomial(groups[g], counts[g]);
    out(static_cast<Eigen::Index>(sym_groups.symmetric_index(counts))) += state[bits] / std::sqrt(norm);
  }
  return StateVector(std::move(sym_groups), std::move(out));
}

StateVector to_computational(const StateVector& state) {
  const auto& sp = state.space();
  if (sp.representation() != Representation::Symmetric) throw std::invalid_argument("state is not symmetric");
  const auto& groups = sp.groups();
  auto comp = SpaceSpec::qubits(groups);
  Vec out = Vec::Zero(static_cast<Eigen::Index>(comp.dim()));
  const int total = comp.num_qubits();
  for (std::size_t bits = 0; bits < comp.qubit_dim(); ++bits) {
    const auto counts = group_counts(bits, groups, total);
    double norm = 1.0;
    for (std::size_t g = 0; g < groups.size(); ++g) norm *= binomial(groups[g], counts[g]);
    out(static_cast<Eigen::Index>(bits)) = state[sp.symmetric_index(counts)] / std::sqrt(norm);
  }
  return StateVector(std::move(comp), std::move(out));
}

DickeDecomposition dicke_decompose(const StateVector& state, int N, int M) {
  const auto& sp = state.space();
  if (sp.representation() != Representation::Computational) {
    throw std::invalid_argument("dicke_decompose expects a computational-basis state");
  }
  if (N < 1 || M < 1) throw std::invalid_argument("dicke_decompose: both groups need at least one qubit");
  if (sp.num_qubits() != N + M) {
    throw std::invalid_argument("dicke_decompose: state has " + std::to_string(sp.num_qubits()) +
                                " qubits, split needs " + std::to_string(N + M));
  }
  DickeDecomposition out;
  std::vector<cplx> acc(static_cast<std::size_t>((N + 1) * (M + 1)), cplx{});
  const std::size_t bdim = sp.boson_dim();
  const std::size_t right_mask = (std::size_t{1} << M) - 1;
  for (std::size_t bits = 0; bits < sp.qubit_dim(); ++bits) {
    const int k = std::popcount(bits >> M);
    const int q = std::popcount(bits & right_mask);
    acc[static_cast<std::size_t>(k * (M + 1) + q)] += state[bits * bdim];
  }
  double weight = 0.0;
  for (int k = 0; k <= N; ++k) {
    for (int q = 0; q <= M; ++q) {
      const cplx c = acc[static_cast<std::size_t>(k * (M + 1) + q)] / std::sqrt(binomial(N, k) * binomial(M, q));
      weight += std::norm(c);
      out.coefficients.emplace(DickePair(N, k, M, q), c);
    }
  }
  out.leakage = std::clamp(1.0 - weight, 0.0, 1.0);
  return out;
}

}  // namespace qbus

#include "qbus/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qbus::ops {

namespace {

using Triplet = Eigen::Triplet<cplx>;

void require_computational(const SpaceSpec& sp) {
  if (sp.representation() != Representation::Computational) {
    throw std::invalid_argument("operator builders need a computational-basis space");
  }
}

void require_qubit(const SpaceSpec& sp, int qubit) {
  require_computational(sp);
  if (qubit < 0 || qubit >= sp.num_qubits()) throw std::out_of_range("qubit index outside space");
}

SparseOp from_triplets(const SpaceSpec& sp, const std::vector<Triplet>& t) {
  const auto n = static_cast<Eigen::Index>(sp.dim());
  SparseOp m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

std::size_t bit_of(const SpaceSpec& sp, int qubit) {
  return (std::size_t{1} << (sp.num_qubits() - 1 - qubit)) * sp.boson_dim();
}

}  // namespace

SparseOp identity(const SpaceSpec& sp) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < sp.dim(); ++i) t.emplace_back(i, i, 1.0);
  return from_triplets(sp, t);
}

SparseOp sigma_plus(const SpaceSpec& sp, int qubit) {
  require_qubit(sp, qubit);
  const std::size_t step = bit_of(sp, qubit);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    if (!sp.excited(i, qubit)) t.emplace_back(i + step, i, 1.0);
  }
  return from_triplets(sp, t);
}

SparseOp sigma_minus(const SpaceSpec& sp, int qubit) { return SparseOp(sigma_plus(sp, qubit).adjoint()); }

SparseOp sigma_z(const SpaceSpec& sp, int qubit) {
  require_qubit(sp, qubit);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < sp.dim(); ++i) t.emplace_back(i, i, sp.excited(i, qubit) ? 1.0 : -1.0);
  return from_triplets(sp, t);
}

SparseOp excited_projector(const SpaceSpec& sp, int qubit) {
  require_qubit(sp, qubit);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    if (sp.excited(i, qubit)) t.emplace_back(i, i, 1.0);
  }
  return from_triplets(sp, t);
}

SparseOp annihilation(const SpaceSpec& sp) {
  require_computational(sp);
  if (!sp.has_boson()) throw std::invalid_argument("space has no boson mode");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    const int n = sp.photons(i);
    if (n > 0) t.emplace_back(i - 1, i, std::sqrt(static_cast<double>(n)));
  }
  return from_triplets(sp, t);
}

SparseOp number(const SpaceSpec& sp) {
  require_computational(sp);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    if (sp.photons(i) > 0) t.emplace_back(i, i, static_cast<double>(sp.photons(i)));
  }
  return from_triplets(sp, t);
}

SparseOp collective_raise(const SpaceSpec& sp, int first, int count) {
  require_computational(sp);
  SparseOp m(static_cast<Eigen::Index>(sp.dim()), static_cast<Eigen::Index>(sp.dim()));
  for (int j = first; j < first + count; ++j) m += sigma_plus(sp, j);
  m.makeCompressed();
  return m;
}

SparseOp collective_lower(const SpaceSpec& sp, int first, int count) {
  return SparseOp(collective_raise(sp, first, count).adjoint());
}

SparseOp excitation_number(const SpaceSpec& sp) {
  require_computational(sp);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    int n = sp.photons(i);
    for (int q = 0; q < sp.num_qubits(); ++q) n += sp.excited(i, q) ? 1 : 0;
    if (n > 0) t.emplace_back(i, i, static_cast<double>(n));
  }
  return from_triplets(sp, t);
}

}  // namespace qbus::ops

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbus/types.hpp"

namespace qbus {

/// How the qubit factor of a space is spanned.
///
/// Computational: 2^Q product basis, qubit 0 is the most significant bit and
/// bit value 1 means excited. Symmetric: one Dicke ladder per group, index
/// k in 0..n per group, group 0 most significant. The boson factor, when
/// present, is always the least significant factor.
enum class Representation { Computational, Symmetric };

class SpaceSpec {
 public:
  static SpaceSpec qubits(std::vector<int> groups, std::optional<int> cutoff = std::nullopt);
  static SpaceSpec symmetric(std::vector<int> groups);
  static SpaceSpec boson(int cutoff);

  const std::vector<int>& groups() const { return groups_; }
  std::optional<int> cutoff() const { return cutoff_; }
  bool has_boson() const { return cutoff_.has_value(); }
  Representation representation() const { return rep_; }

  int num_qubits() const;
  int group_offset(int group) const;
  std::size_t boson_dim() const { return cutoff_ ? static_cast<std::size_t>(*cutoff_) + 1 : 1; }
  std::size_t qubit_dim() const;
  std::size_t dim() const { return qubit_dim() * boson_dim(); }

  /// Computational representation only: whether `qubit` is excited in basis state `index`.
  bool excited(std::size_t index, int qubit) const;
  /// Computational representation only: index of a product state.
  std::size_t index_of(std::string_view qubit_string, int photons = 0) const;
  /// Symmetric representation only: index of a Dicke-pair (or Dicke-tuple) state.
  std::size_t symmetric_index(const std::vector<int>& excitations, int photons = 0) const;
  std::vector<int> symmetric_excitations(std::size_t index) const;
  int photons(std::size_t index) const { return static_cast<int>(index % boson_dim()); }

  /// Factor dimensions used by partial traces: one entry per qubit (or per
  /// group in the symmetric representation), then the boson if present.
  std::vector<std::size_t> factor_dims() const;

  std::string describe() const;

  bool operator==(const SpaceSpec&) const = default;

 private:
  SpaceSpec(std::vector<int> groups, std::optional<int> cutoff, Representation rep);

  std::vector<int> groups_;
  std::optional<int> cutoff_;
  Representation rep_ = Representation::Computational;
};

/// Pure state. Amplitudes are never renormalized behind the caller's back.
class StateVector {
 public:
  StateVector(SpaceSpec space, Vec amplitudes);

  static StateVector basis(const SpaceSpec& space, std::size_t index);
  /// Product state such as "egg" with `photons` in the mode; groups default to one group.
  static StateVector product(std::string_view qubits, int photons = 0,
                             std::optional<int> cutoff = std::nullopt,
                             std::optional<std::vector<int>> groups = std::nullopt);

  const SpaceSpec& space() const { return space_; }
  const Vec& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

  double norm() const { return amps_.norm(); }
  StateVector normalized() const;
  /// <this|other>
  cplx inner(const StateVector& other) const;
  /// Same amplitudes viewed on a different space of equal dimension.
  StateVector relabeled(SpaceSpec space) const;

 private:
  SpaceSpec space_;
  Vec amps_;
};

class DensityMatrix {
 public:
  DensityMatrix(SpaceSpec space, Mat matrix);
  static DensityMatrix from_pure(const StateVector& psi);

  const SpaceSpec& space() const { return space_; }
  const Mat& matrix() const { return rho_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }

  double trace() const { return rho_.trace().real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double population(std::size_t index) const { return rho_(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)).real(); }

  /// Throws NumericalError unless Hermitian, unit-trace and positive within tolerances.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-8, double pos_tol = 1e-8) const;

 private:
  SpaceSpec space_;
  Mat rho_;
};

/// Kronecker product. Groups are concatenated; at most one factor may carry
/// the boson, which stays the least significant factor of the result.
StateVector tensor(const StateVector& a, const StateVector& b);

}  // namespace qbus

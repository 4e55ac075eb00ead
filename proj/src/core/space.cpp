#include "qbus/space.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qbus/error.hpp"

namespace qbus {

SpaceSpec::SpaceSpec(std::vector<int> groups, std::optional<int> cutoff, Representation rep)
    : groups_(std::move(groups)), cutoff_(cutoff), rep_(rep) {
  for (int g : groups_) {
    if (g < 0) throw std::invalid_argument("qubit group size must be >= 0");
  }
  if (cutoff_ && *cutoff_ < 0) throw std::invalid_argument("boson cutoff must be >= 0");
  if (rep_ == Representation::Computational && num_qubits() > 24) {
    throw std::invalid_argument("computational space too large (more than 24 qubits)");
  }
}

SpaceSpec SpaceSpec::qubits(std::vector<int> groups, std::optional<int> cutoff) {
  return SpaceSpec(std::move(groups), cutoff, Representation::Computational);
}

SpaceSpec SpaceSpec::symmetric(std::vector<int> groups) {
  return SpaceSpec(std::move(groups), std::nullopt, Representation::Symmetric);
}

SpaceSpec SpaceSpec::boson(int cutoff) { return SpaceSpec({}, cutoff, Representation::Computational); }

int SpaceSpec::num_qubits() const { return std::accumulate(groups_.begin(), groups_.end(), 0); }

int SpaceSpec::group_offset(int group) const {
  if (group < 0 || group >= static_cast<int>(groups_.size())) throw std::out_of_range("group index");
  return std::accumulate(groups_.begin(), groups_.begin() + group, 0);
}

std::size_t SpaceSpec::qubit_dim() const {
  if (rep_ == Representation::Computational) return std::size_t{1} << num_qubits();
  std::size_t d = 1;
  for (int g : groups_) d *= static_cast<std::size_t>(g + 1);
  return d;
}

bool SpaceSpec::excited(std::size_t index, int qubit) const {
  const int q = num_qubits();
  const std::size_t bits = index / boson_dim();
  return (bits >> (q - 1 - qubit)) & 1U;
}

std::size_t SpaceSpec::index_of(std::string_view qubit_string, int photons) const {
  if (rep_ != Representation::Computational) throw std::logic_error("index_of needs a computational space");
  if (static_cast<int>(qubit_string.size()) != num_qubits()) {
    throw std::invalid_argument("qubit string length does not match the space");
  }
  if (photons < 0 || static_cast<std::size_t>(photons) >= boson_dim()) {
    throw std::invalid_argument("photon number outside the truncated mode");
  }
  std::size_t bits = 0;
  for (char c : qubit_string) {
    bits <<= 1;
    if (c == 'e' || c == '1') {
      bits |= 1;
    } else if (c != 'g' && c != '0') {
      throw std::invalid_argument("qubit string may only contain 'g'/'e'");
    }
  }
  return bits * boson_dim() + static_cast<std::size_t>(photons);
}

std::size_t SpaceSpec::symmetric_index(const std::vector<int>& excitations, int photons) const {
  if (rep_ != Representation::Symmetric) throw std::logic_error("symmetric_index needs a symmetric space");
  if (excitations.size() != groups_.size()) throw std::invalid_argument("one excitation count per group");
  std::size_t idx = 0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (excitations[g] < 0 || excitations[g] > groups_[g]) throw std::domain_error("excitation count out of range");
    idx = idx * static_cast<std::size_t>(groups_[g] + 1) + static_cast<std::size_t>(excitations[g]);
  }
  return idx * boson_dim() + static_cast<std::size_t>(photons);
}

std::vector<int> SpaceSpec::symmetric_excitations(std::size_t index) const {
  std::vector<int> ex(groups_.size());
  std::size_t rest = index / boson_dim();
  for (std::size_t g = groups_.size(); g-- > 0;) {
    const auto radix = static_cast<std::size_t>(groups_[g] + 1);
    ex[g] = static_cast<int>(rest % radix);
    rest /= radix;
  }
  return ex;
}

std::vector<std::size_t> SpaceSpec::factor_dims() const {
  std::vector<std::size_t> dims;
  if (rep_ == Representation::Computational) {
    dims.assign(static_cast<std::size_t>(num_qubits()), 2);
  } else {
    for (int g : groups_) dims.push_back(static_cast<std::size_t>(g + 1));
  }
  if (cutoff_) dims.push_back(boson_dim());
  return dims;
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  os << (rep_ == Representation::Computational ? "qubits" : "dicke") << "[";
  for (std::size_t i = 0; i < groups_.size(); ++i) os << (i ? "," : "") << groups_[i];
  os << "]";
  if (cutoff_) os << "+mode(n<=" << *cutoff_ << ")";
  return os.str();
}

StateVector::StateVector(SpaceSpec space, Vec amplitudes) : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != space_.dim()) {
    throw std::invalid_argument("amplitude vector length " + std::to_string(amps_.size()) +
                                " does not match space dimension " + std::to_string(space_.dim()));
  }
}

StateVector StateVector::basis(const SpaceSpec& space, std::size_t index) {
  if (index >= space.dim()) throw std::out_of_range("basis index outside space");
  Vec v = Vec::Zero(static_cast<Eigen::Index>(space.dim()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(space, std::move(v));
}

StateVector StateVector::product(std::string_view qubits, int photons, std::optional<int> cutoff,
                                 std::optional<std::vector<int>> groups) {
  std::vector<int> g = groups ? *groups : std::vector<int>{};
  if (!groups && !qubits.empty()) g.push_back(static_cast<int>(qubits.size()));
  auto space = SpaceSpec::qubits(std::move(g), cutoff);
  return basis(space, space.index_of(qubits, photons));
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  return StateVector(space_, amps_ / n);
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("inner product of states with different dimensions");
  return amps_.dot(other.amps_);  // Eigen's dot conjugates the left operand
}

StateVector StateVector::relabeled(SpaceSpec space) const { return StateVector(std::move(space), amps_); }

DensityMatrix::DensityMatrix(SpaceSpec space, Mat matrix) : space_(std::move(space)), rho_(std::move(matrix)) {
  if (rho_.rows() != rho_.cols() || static_cast<std::size_t>(rho_.rows()) != space_.dim()) {
    throw std::invalid_argument("density matrix shape does not match space dimension");
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return DensityMatrix(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  Mat h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double pos_tol) const {
  if (const double h = hermiticity_error(); h > herm_tol) {
    throw NumericalError("density matrix not Hermitian (error " + std::to_string(h) + ")");
  }
  if (const double t = std::abs(trace() - 1.0); t > trace_tol) {
    throw NumericalError("density matrix trace deviates from 1 by " + std::to_string(t));
  }
  if (const double e = min_eigenvalue(); e < -pos_tol) {
    throw NumericalError("density matrix has negative eigenvalue " + std::to_string(e));
  }
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const auto& sa = a.space();
  const auto& sb = b.space();
  if (sa.has_boson() && sb.has_boson()) throw std::invalid_argument("tensor: both factors carry a boson mode");
  if (sa.representation() != sb.representation()) {
    throw std::invalid_argument("tensor: factors use different representations");
  }
  std::vector<int> groups = sa.groups();
  groups.insert(groups.end(), sb.groups().begin(), sb.groups().end());
  const std::optional<int> cutoff = sa.has_boson() ? sa.cutoff() : sb.cutoff();
  SpaceSpec space = sa.representation() == Representation::Computational ? SpaceSpec::qubits(groups, cutoff)
                                                                          : SpaceSpec::symmetric(groups);

  const std::size_t qa = sa.qubit_dim(), qb = sb.qubit_dim();
  const std::size_t ba = sa.boson_dim(), bb = sb.boson_dim();
  const std::size_t bdim = space.boson_dim();
  Vec out = Vec::Zero(static_cast<Eigen::Index>(space.dim()));
  for (std::size_t ia = 0; ia < qa; ++ia) {
    for (std::size_t na = 0; na < ba; ++na) {
      const cplx va = a[ia * ba + na];
      if (va == cplx{}) continue;
      for (std::size_t ib = 0; ib < qb; ++ib) {
        for (std::size_t nb = 0; nb < bb; ++nb) {
          const std::size_t n = na + nb;  // one of the two is always 0
          const std::size_t idx = (ia * qb + ib) * bdim + n;
          out(static_cast<Eigen::Index>(idx)) += va * b[ib * bb + nb];
        }
      }
    }
  }
  return StateVector(std::move(space), std::move(out));
}

}  // namespace qbus

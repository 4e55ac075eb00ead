#include "qbus/design.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace qbus {

std::array<double, 2> bell_coupling_ratios() { return {std::sqrt(2.0) - 1.0, -(std::sqrt(2.0) + 1.0)}; }

CouplingProfile w_couplings(int N, int k, double chi_ref) {
  if (N < 2) throw ConfigError("W couplings need N >= 2 qubits");
  if (k < 0 || k >= N) throw ConfigError("boosted qubit index outside 0..N-1");
  if (!(chi_ref > 0.0)) throw ConfigError("reference coupling must be positive");
  std::vector<double> chi(static_cast<std::size_t>(N), chi_ref);
  chi[static_cast<std::size_t>(k)] = (1.0 + std::sqrt(static_cast<double>(N))) * chi_ref;
  return CouplingProfile(std::move(chi));
}

std::array<double, 2> w_condition_residuals(const CouplingProfile& profile, int k) {
  if (k < 0 || k >= static_cast<int>(profile.size())) throw std::out_of_range("qubit index outside profile");
  double s1 = 0.0, s2 = 0.0;
  for (double x : profile.chi()) {
    s1 += x;
    s2 += x * x;
  }
  const double lhs = s1 / s2;
  const double rn = std::sqrt(static_cast<double>(profile.size()));
  const double chik = profile[static_cast<std::size_t>(k)];
  return {std::abs(lhs - (1.0 - rn) / (2.0 * chik)), std::abs(lhs - (1.0 + rn) / (2.0 * chik))};
}

double verify_w_condition(const CouplingProfile& profile, int k) {
  const auto r = w_condition_residuals(profile, k);
  return std::min(r[0], r[1]);
}

namespace {

// Both orientations of a transition describe the same pair of levels.
TransitionSpec canonical(const TransitionSpec& t) { return t.branch == Branch::Minus ? t : t.reversed(); }

SelectivityRow make_row(const TransitionSpec& t, const DispersiveParams& p) {
  const double d = transition_detuning(t, p).validated;
  const double el = transition_element(t, p);
  return {t, d, el, std::abs(d) / el};
}

std::string describe(const TransitionSpec& t) {
  std::ostringstream os;
  const auto tgt = t.target();
  os << "(" << t.source.left.q << "," << t.source.right.q << ")->(" << tgt.left.q << "," << tgt.right.q << ")";
  return os.str();
}

}  // namespace

SelectivityReport selectivity_report(const DispersiveParams& params, const TransitionSpec& chosen,
                                     std::vector<int> populated_totals) {
  if (!chosen.valid()) throw ConfigError("chosen transition leaves the Dicke ladder");
  const int N = params.N(), M = params.M();
  if (chosen.source.left.M != N || chosen.source.right.M != M) {
    throw ConfigError("transition group sizes do not match the parameters");
  }
  if (populated_totals.empty()) populated_totals = {chosen.source.left.q + chosen.source.right.q};
  std::sort(populated_totals.begin(), populated_totals.end());
  populated_totals.erase(std::unique(populated_totals.begin(), populated_totals.end()), populated_totals.end());

  SelectivityReport rep{chosen, params, {}, populated_totals, std::numeric_limits<double>::infinity()};
  rep.rows.push_back(make_row(chosen, params));
  const TransitionSpec chosen_c = canonical(chosen);
  const std::set<int> totals(populated_totals.begin(), populated_totals.end());
  for (int k = 1; k <= N; ++k) {
    for (int q = 0; q < M; ++q) {
      if (!totals.count(k + q)) continue;
      const TransitionSpec t(DickePair(N, k, M, q), Branch::Minus);
      if (t == chosen_c) continue;
      rep.rows.push_back(make_row(t, params));
      rep.margin = std::min(rep.margin, rep.rows.back().ratio);
    }
  }
  return rep;
}

namespace {

// Bisection on a bracket with a sign change; stops once |f| is below tol(x).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const std::function<double(double)>& tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double fbest = std::min(std::abs(flo), std::abs(fhi));
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at double resolution
    const double fm = f(mid);
    if (std::abs(fm) < fbest || (std::abs(fm) == fbest && mid < best)) {
      best = mid;
      fbest = std::abs(fm);
    }
    if (std::abs(fm) < tol(mid)) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace

SelectivityReport solve_selective_params(const SelectiveRequest& rq) {
  if (rq.N < 1 || rq.M < 1) throw ConfigError("group sizes must be positive");
  if (rq.spec.source.left.M != rq.N || rq.spec.source.right.M != rq.M) {
    throw ConfigError("transition group sizes do not match N, M");
  }
  if (!rq.spec.valid()) throw ConfigError("no such transition: " + std::string(rq.spec.branch == Branch::Plus ? "+" : "-") +
                                          " branch leaves the Dicke ladder");
  if (!(rq.g2 > 0.0) || !(rq.delta1 > 0.0)) throw ConfigError("g2 and Delta1 must be positive");

  auto params_at = [&](double x) {
    return rq.free == FreeParameter::G1 ? DispersiveParams(rq.N, rq.M, x, rq.g2, rq.delta1, rq.delta2)
                                        : DispersiveParams(rq.N, rq.M, rq.g1, rq.g2, rq.delta1, x);
  };
  auto detuning = [&](double x) { return transition_detuning(rq.spec, params_at(x)).validated; };
  // The floor keeps the target reachable when Delta2 itself is the unknown.
  auto tol = [&](double x) {
    const auto p = params_at(x);
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(p.delta1(), std::abs(p.delta2()));
    return std::max(1e-9 * p.omega_eff(), floor);
  };

  double lo, hi;
  if (rq.free == FreeParameter::G1) {
    if (!(rq.delta2 > 0.0)) throw ConfigError("Delta2 must be positive");
    lo = rq.g2 / 1e4;
    hi = rq.delta1 / 5.0;
  } else {
    if (!(rq.g1 > 0.0)) throw ConfigError("g1 must be positive");
    lo = rq.delta1 / 2.0;
    hi = 2.0 * rq.delta1;
  }
  const double x = bisect(detuning, lo, hi, tol);
  if (std::isnan(x)) {
    std::ostringstream os;
    os << "no resonance for " << describe(rq.spec) << " in bracket [" << lo << ", " << hi << "]: detuning "
       << detuning(lo) << " .. " << detuning(hi);
    throw SelectivityError(SelectivityError::Kind::NoRoot, os.str(), std::nullopt);
  }
  const DispersiveParams p = params_at(x);
  if (std::abs(detuning(x)) >= tol(x)) {
    throw NumericalError("bisection did not reach the resonance tolerance");
  }
  auto totals = rq.populated_totals;
  SelectivityReport rep = selectivity_report(p, rq.spec, totals);
  if (!p.is_dispersive(rq.dispersive_threshold)) {
    std::ostringstream os;
    os << "solved parameters leave the dispersive regime: min(Delta/g) = " << p.dispersive_ratio() << " < "
       << rq.dispersive_threshold;
    throw SelectivityError(SelectivityError::Kind::NotDispersive, os.str(), rep);
  }
  if (rep.margin < rq.margin_threshold) {
    std::ostringstream os;
    os << "selectivity margin " << rep.margin << " below threshold " << rq.margin_threshold << " for "
       << describe(rq.spec);
    throw SelectivityError(SelectivityError::Kind::MarginViolation, os.str(), rep);
  }
  return rep;
}

std::vector<Table1Row> table1_parameter_sets(double g2) {
  struct Printed {
    const char* label;
    double d2d1, g1g2, d1g1, d2g2;
    int k;
  };
  static constexpr Printed rows[] = {
      {"I", 0.9996, 18.630, 53.7, 1000.0, 3},
      {"II", 1.0025, 70.621, 20.0, 1416.0, 2},
      {"III", 1.0075, 17.611, 20.15, 355.0, 1},
  };
  std::vector<Table1Row> out;
  for (const auto& r : rows) {
    const double g1 = r.g1g2 * g2;
    DispersiveParams p(3, 3, g1, g2, r.d1g1 * g1, r.d2g2 * g2);
    TransitionSpec t(DickePair(3, r.k, 3, 3 - r.k), Branch::Minus);
    const auto det = transition_detuning(t, p);
    out.push_back({r.label, r.d2d1, r.g1g2, r.d1g1, r.d2g2, p, t, det.validated, det.literal,
                   transition_element(t, p), p.delta2() / p.delta1()});
  }
  return out;
}

std::vector<TransitionSpec> noon_transitions(int N) {
  if (N < 2) throw ConfigError("NOON protocol needs N >= 2");
  std::vector<TransitionSpec> out;
  for (int i = 0; i < N; ++i) out.emplace_back(DickePair(N, N - i, N, i), Branch::Minus);
  return out;
}

std::vector<SelectivityReport> noon_schedule(int N, double g1, double g2, double delta1, double margin_threshold) {
  std::vector<SelectivityReport> out;
  for (const auto& t : noon_transitions(N)) {
    SelectiveRequest rq;
    rq.N = rq.M = N;
    rq.spec = t;
    rq.g1 = g1;
    rq.g2 = g2;
    rq.delta1 = delta1;
    rq.free = FreeParameter::Delta2;
    rq.margin_threshold = margin_threshold;
    rq.populated_totals = {N};
    out.push_back(solve_selective_params(rq));
  }
  return out;
}

std::vector<SelectivityReport> sequential_schedule(int M0, int q_target, double g1, double g2, double delta1) {
  if (M0 < 1 || q_target < 0) throw ConfigError("sequential schedule needs M0 >= 1 and q_target >= 0");
  std::vector<SelectivityReport> out;
  for (int i = 0; i < q_target; ++i) {
    const int M = M0 + i;
    SelectiveRequest rq;
    rq.N = 1;
    rq.M = M;
    rq.spec = TransitionSpec(DickePair(1, 1, M, i), Branch::Minus);
    rq.g1 = g1;
    rq.g2 = g2;
    rq.delta1 = delta1;
    rq.free = FreeParameter::Delta2;
    out.push_back(solve_selective_params(rq));
  }
  return out;
}

}  // namespace qbus

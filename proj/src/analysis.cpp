#include "gpm/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gpm/dynamics.hpp"
#include "gpm/enumerate.hpp"

namespace gpm {

std::string baseline_kind(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::exact: return "exact";
    case BaselineMethod::rowfill: return "constructive";
    case BaselineMethod::anneal: return "annealed";
  }
  return "unknown";
}

BaselineMethod parse_baseline_method(const std::string& name) {
  if (name == "exact") return BaselineMethod::exact;
  if (name == "rowfill" || name == "constructive") return BaselineMethod::rowfill;
  if (name == "anneal" || name == "annealed") return BaselineMethod::anneal;
  throw std::invalid_argument("unknown baseline method '" + name + "' (expected exact, rowfill or anneal)");
}

namespace {

Subdivision exact_subdivision(std::shared_ptr<const TorusLattice> lat, const CountsVector& counts,
                              const CostMatrix& a) {
  const std::uint64_t states = multinomial_count(counts);
  if (states > kExactStateLimit)
    throw std::invalid_argument("exact subdivision refused: " + std::to_string(states) + " configurations exceed " +
                                std::to_string(kExactStateLimit));
  std::vector<Color> best;
  double best_energy = 0.0;
  for_each_coloring_with_counts(counts, lat->vertex_count(), [&](const std::vector<Color>& colors) {
    const double h = partition_cost(*lat, colors, a);
    if (best.empty() || h < best_energy) {
      best = colors;
      best_energy = h;
    }
  });
  return {Configuration(std::move(lat), a.q(), std::move(best)), best_energy, BaselineMethod::exact};
}

Subdivision annealed_subdivision(Configuration start, const CostMatrix& a, const AnnealSchedule& schedule) {
  if (!(schedule.beta_start >= 0.0) || !(schedule.factor >= 1.0) || schedule.sweeps_per_stage == 0)
    throw std::invalid_argument("invalid annealing schedule");
  ChainParams params;
  params.beta = schedule.beta_start;
  params.matrix = a;
  params.side_length = start.lattice().side_length();
  params.mode = Dynamics::kawasaki;
  params.seed = schedule.seed;
  Chain chain(params, start);
  Subdivision best{std::move(start), chain.energy(), BaselineMethod::anneal};
  const std::uint64_t sweep = sweep_size(Dynamics::kawasaki, chain.configuration().lattice());
  double beta = schedule.beta_start;
  for (std::uint64_t s = 1; s <= schedule.total_sweeps; ++s) {
    for (std::uint64_t i = 0; i < sweep; ++i) chain.kawasaki_step();
    if (chain.energy() < best.energy) {
      best.configuration = chain.configuration();
      best.energy = chain.energy();
    }
    if (s % schedule.sweeps_per_stage == 0) {
      beta = std::min(schedule.beta_max, beta * schedule.factor);
      chain.set_beta(beta);
    }
  }
  best.energy = hamiltonian(best.configuration, a);
  return best;
}

}  // namespace

Subdivision minimal_cost_subdivision(int side_length, const CountsVector& counts, const CostMatrix& a,
                                     BaselineMethod method, const AnnealSchedule& schedule) {
  if (counts.q() != a.q()) throw std::invalid_argument("counts and cost matrix disagree on q");
  auto lat = std::make_shared<const TorusLattice>(side_length);
  if (method == BaselineMethod::exact) return exact_subdivision(lat, counts, a);
  Configuration rowfill = rowfill_configuration(lat, counts);
  if (method == BaselineMethod::rowfill) {
    const double h = hamiltonian(rowfill, a);
    return {std::move(rowfill), h, BaselineMethod::rowfill};
  }
  return annealed_subdivision(std::move(rowfill), a, schedule);
}

Subdivision minimal_cost_subdivision(int side_length, const DensityVector& rho, const CostMatrix& a,
                                     BaselineMethod method, const AnnealSchedule& schedule) {
  return minimal_cost_subdivision(side_length, counts_from_density(rho, side_length), a, method, schedule);
}

std::vector<Color> bridge_partition(const Configuration& sigma, const BridgeSystem& bs) {
  std::vector<Color> parts(sigma.size(), 0);
  const auto& lab = bs.labeling;
  for (VertexId v = 0; v < sigma.size(); ++v) {
    const int k = lab.component_of[v];
    parts[v] = k >= 0 ? lab.labels[static_cast<std::size_t>(k)] : sigma[v];
  }
  return parts;
}

SortedReport check_sorted(const Configuration& sigma, const CostMatrix& a, double alpha, double delta,
                          const Subdivision& baseline) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a finite number > 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (sigma.q() != a.q()) throw std::invalid_argument("configuration and cost matrix disagree on q");
  const CountsVector want = magnetization(baseline.configuration);
  const CountsVector have = magnetization(sigma);
  if (!(want == have) || !(sigma.lattice() == baseline.configuration.lattice()))
    throw std::invalid_argument("configuration magnetization does not match the target densities");

  const BridgeSystem bs = build_bridge_system(sigma, delta);
  SortedReport r;
  r.alpha = alpha;
  r.delta = delta;
  r.baseline = baseline.method;
  r.baseline_cost = baseline.energy;
  r.conservative = baseline.method != BaselineMethod::exact;
  r.parts = bridge_partition(sigma, bs);
  r.partition_cost = partition_cost(sigma.lattice(), r.parts, a);
  r.boundary_size = boundary_size(sigma);
  r.bridge_count = bs.bridges.size();
  r.bridged_support = bs.contours.support_size();

  const auto q = static_cast<std::size_t>(a.q());
  r.partition_sizes.assign(q, 0);
  std::vector<std::int64_t> off(q, 0);
  for (VertexId v = 0; v < sigma.size(); ++v) {
    ++r.partition_sizes[r.parts[v] - 1];
    if (sigma[v] != r.parts[v]) ++off[r.parts[v] - 1];
  }
  r.pure = true;
  for (std::size_t i = 0; i < q; ++i) {
    const auto size = static_cast<double>(r.partition_sizes[i]);
    r.impurities.push_back(size > 0 ? static_cast<double>(off[i]) / size : 0.0);
    if (static_cast<double>(off[i]) > delta * size) r.pure = false;
  }
  r.low_energy = r.partition_cost <= alpha * r.baseline_cost;
  if (r.baseline_cost > 0.0) r.ratio = r.partition_cost / r.baseline_cost;
  r.passed = r.pure && r.low_energy;
  return r;
}

SortedReport check_sorted(const Configuration& sigma, const CostMatrix& a, const DensityVector& rho, double alpha,
                          double delta, BaselineMethod method, const AnnealSchedule& schedule) {
  const int side = sigma.lattice().side_length();
  const CountsVector counts = counts_from_density(rho, side);
  if (!(magnetization(sigma) == counts))
    throw std::invalid_argument("configuration magnetization does not match the target densities");
  return check_sorted(sigma, a, alpha, delta, minimal_cost_subdivision(side, counts, a, method, schedule));
}

RegionBounds region_size_bounds(double rho_i, double delta, int side_length, int q) {
  const double n = static_cast<double>(side_length) * side_length;
  return {(rho_i - delta) / (1.0 - delta) * n - q, rho_i / (1.0 - delta) * n + q};
}

bool corollary_bounds(const SortedReport& report, const DensityVector& rho, int side_length) {
  if (static_cast<int>(report.partition_sizes.size()) != rho.q())
    throw std::invalid_argument("report and density vector disagree on q");
  for (int i = 0; i < rho.q(); ++i) {
    const auto b = region_size_bounds(rho.values()[i], report.delta, side_length, rho.q());
    const auto size = static_cast<double>(report.partition_sizes[i]);
    if (size < b.lower || size > b.upper) return false;
  }
  return true;
}

ThetaMatrix::ThetaMatrix(std::vector<std::vector<double>> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("theta matrix is empty");
  for (const auto& row : entries_) {
    if (row.size() != entries_.size()) throw std::invalid_argument("theta matrix must be square");
    for (double x : row)
      if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("theta entries must be finite and nonnegative");
  }
}

void ThetaMatrix::validate() const {
  const int n = q();
  for (int j = 0; j < n; ++j) {
    double sum = 0.0, off = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += entries_[i][j];
      if (i != j) off += entries_[i][j];
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::invalid_argument("theta column " + std::to_string(j + 1) + " sums to " + std::to_string(sum) +
                                  ", not 1");
    if (!(entries_[j][j] > off))
      throw std::invalid_argument("theta is not diagonally dominant in column " + std::to_string(j + 1));
  }
}

double ThetaMatrix::distance_from_identity() const {
  double worst = 0.0;
  for (int j = 0; j < q(); ++j) {
    double col = 0.0;
    for (int i = 0; i < q(); ++i) col += std::abs(entries_[i][j] - (i == j ? 1.0 : 0.0));
    worst = std::max(worst, col);
  }
  return worst;
}

std::vector<Color> ThetaEstimate::missing() const {
  std::vector<Color> out;
  for (std::size_t j = 0; j < observed.size(); ++j)
    if (!observed[j]) out.push_back(static_cast<Color>(j + 1));
  return out;
}

const ThetaMatrix& ThetaEstimate::require_complete() const {
  const auto gaps = missing();
  if (!gaps.empty())
    throw std::runtime_error("no region labeled with color " + std::to_string(gaps.front()) +
                             " was observed; theta column is undetermined");
  return theta;
}

ThetaEstimate estimate_theta(const std::vector<Configuration>& samples, double delta, std::size_t min_component) {
  if (samples.empty()) throw std::invalid_argument("theta estimation needs at least one sample");
  const int q = samples.front().q();
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(q), std::vector<std::uint64_t>(q, 0));
  std::vector<std::uint64_t> mass(static_cast<std::size_t>(q), 0);
  for (const auto& sigma : samples) {
    if (sigma.q() != q) throw std::invalid_argument("samples disagree on q");
    const BridgeSystem bs = build_bridge_system(sigma, delta);
    for (std::size_t k = 0; k < bs.labeling.size(); ++k) {
      const auto& comp = bs.labeling.components[k];
      if (comp.size() < min_component) continue;
      const std::size_t j = bs.labeling.labels[k] - 1;
      for (VertexId v : comp.members()) ++counts[sigma[v] - 1][j];
      mass[j] += comp.size();
    }
  }
  std::vector<std::vector<double>> theta(static_cast<std::size_t>(q), std::vector<double>(q, 0.0));
  std::vector<bool> observed(static_cast<std::size_t>(q), false);
  for (std::size_t j = 0; j < static_cast<std::size_t>(q); ++j) {
    observed[j] = mass[j] > 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(q); ++i)
      theta[i][j] = observed[j] ? static_cast<double>(counts[i][j]) / static_cast<double>(mass[j]) : (i == j);
  }
  return {ThetaMatrix(std::move(theta)), std::move(observed), std::move(mass)};
}

AdjustedDensity adjusted_density(const ThetaMatrix& theta, const DensityVector& rho) {
  if (theta.q() != rho.q()) throw std::invalid_argument("theta and density vector disagree on q");
  theta.validate();
  const int q = theta.q();
  Eigen::MatrixXd m(q, q);
  Eigen::VectorXd b(q);
  for (int i = 0; i < q; ++i) {
    b(i) = rho.values()[i];
    for (int j = 0; j < q; ++j) m(i, j) = theta.rows()[i][j];
  }
  const Eigen::VectorXd x = m.fullPivLu().solve(b);
  AdjustedDensity out;
  double sum = 0.0;
  for (int i = 0; i < q; ++i) {
    if (!(x(i) > 0.0))
      throw std::domain_error("adjusted density has a non-positive entry for color " + std::to_string(i + 1) +
                              ": rho lies outside the convex hull of theta's columns");
    out.rho.push_back(x(i));
    sum += x(i);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("adjusted density does not sum to 1");
  return out;
}

}  // namespace gpm

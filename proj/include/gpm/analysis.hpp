#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpm/bridging.hpp"
#include "gpm/model.hpp"

namespace gpm {

enum class BaselineMethod { exact, rowfill, anneal };

// "exact", "constructive" or "annealed", as reported in SortedReport.
std::string baseline_kind(BaselineMethod m);
// Parses "exact", "rowfill" or "anneal".
BaselineMethod parse_baseline_method(const std::string& name);

// Geometric cooling under Kawasaki moves: beta starts at beta_start and is
// multiplied by factor every sweeps_per_stage sweeps, capped at beta_max.
struct AnnealSchedule {
  double beta_start = 0.2;
  double beta_max = 4.0;
  double factor = 1.05;
  std::uint64_t sweeps_per_stage = 10;
  std::uint64_t total_sweeps = 500;
  std::uint64_t seed = 0;
};

struct Subdivision {
  Configuration configuration;
  double energy = 0.0;
  BaselineMethod method = BaselineMethod::exact;
};

// Least-energy configuration with the given counts. exact enumerates Omega_n
// (refused above kExactStateLimit states, first minimizer in enumeration
// order); rowfill is the row-major fill; anneal starts from rowfill and keeps
// the best configuration seen at sweep boundaries.
Subdivision minimal_cost_subdivision(int side_length, const CountsVector& counts, const CostMatrix& a,
                                     BaselineMethod method, const AnnealSchedule& schedule = {});
Subdivision minimal_cost_subdivision(int side_length, const DensityVector& rho, const CostMatrix& a,
                                     BaselineMethod method, const AnnealSchedule& schedule = {});

struct SortedReport {
  bool passed = false;
  bool pure = false;        // property 1
  bool low_energy = false;  // property 2
  std::vector<std::int64_t> partition_sizes;  // |R_i|
  std::vector<double> impurities;             // off-color fraction of R_i (0 when empty)
  double partition_cost = 0.0;
  double baseline_cost = 0.0;
  BaselineMethod baseline = BaselineMethod::exact;
  // A pass is sound; with a non-exact baseline a fail may be spurious.
  bool conservative = false;
  std::optional<double> ratio;  // partition_cost / baseline_cost when baseline_cost > 0
  double alpha = 0.0;
  double delta = 0.0;
  std::size_t boundary_size = 0;
  std::size_t bridge_count = 0;
  std::size_t bridged_support = 0;
  std::vector<Color> parts;  // part index of each vertex
};

// Partition induced by a bridge system: complement components go to their
// label's part, bridged-support vertices to their own color.
std::vector<Color> bridge_partition(const Configuration& sigma, const BridgeSystem& bs);

// Checks Sorted(alpha, delta) on the bridging-induced partition against a
// precomputed baseline. Throws if sigma's magnetization differs from the
// baseline's or alpha <= 1 or delta is outside (0, 1).
SortedReport check_sorted(const Configuration& sigma, const CostMatrix& a, double alpha, double delta,
                          const Subdivision& baseline);
SortedReport check_sorted(const Configuration& sigma, const CostMatrix& a, const DensityVector& rho, double alpha,
                          double delta, BaselineMethod method, const AnnealSchedule& schedule = {});

// [(rho_i - delta) / (1 - delta) N - q, rho_i / (1 - delta) N + q].
struct RegionBounds {
  double lower = 0.0;
  double upper = 0.0;
};
RegionBounds region_size_bounds(double rho_i, double delta, int side_length, int q);

// Every |R_i| of the report lies within region_size_bounds.
bool corollary_bounds(const SortedReport& report, const DensityVector& rho, int side_length);

// q x q matrix, theta(i, j) = density of color i in regions of mostly j.
class ThetaMatrix {
 public:
  explicit ThetaMatrix(std::vector<std::vector<double>> entries);

  int q() const { return static_cast<int>(entries_.size()); }
  double operator()(Color i, Color j) const { return entries_[i - 1][j - 1]; }
  const std::vector<std::vector<double>>& rows() const { return entries_; }

  // Throws unless columns sum to 1 within 1e-6 and each diagonal entry
  // exceeds the rest of its column.
  void validate() const;
  // max_j sum_i |theta(i, j) - [i == j]|.
  double distance_from_identity() const;

 private:
  std::vector<std::vector<double>> entries_;
};

struct ThetaEstimate {
  ThetaMatrix theta;
  std::vector<bool> observed;         // per column
  std::vector<std::uint64_t> mass;    // vertices pooled per column

  std::vector<Color> missing() const;
  // Throws naming the first unobserved color.
  const ThetaMatrix& require_complete() const;
};

// Pools color fractions over labeled components of each sample's delta-bridge
// system, skipping components smaller than min_component vertices. Columns
// without mass are left as e_j and reported missing.
ThetaEstimate estimate_theta(const std::vector<Configuration>& samples, double delta, std::size_t min_component = 9);

struct AdjustedDensity {
  std::vector<double> rho;
};

// Solves theta rho* = rho after validating theta; throws when rho* has a
// non-positive entry (rho outside the convex hull of theta's columns).
AdjustedDensity adjusted_density(const ThetaMatrix& theta, const DensityVector& rho);

}  // namespace gpm

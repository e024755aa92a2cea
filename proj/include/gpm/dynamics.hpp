#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "gpm/model.hpp"
#include "gpm/random.hpp"

namespace gpm {

enum class Dynamics { kawasaki, glauber };

struct ChainParams {
  double beta = 1.0;
  CostMatrix matrix;
  int side_length = 3;
  Dynamics mode = Dynamics::kawasaki;
  // Target magnetization for Kawasaki runs; the initial state must match it.
  std::optional<CountsVector> counts;
  // Glauber field; empty means h = 0.
  MagneticField field;
  std::uint64_t steps = 0;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
};

// Proposals per sweep: 3 L^2 (one per edge on average) for Kawasaki, L^2 for
// Glauber.
std::uint64_t sweep_size(Dynamics mode, const TorusLattice& lat);

// Metropolis chain over colorings with running energy and magnetization.
//
// Kawasaki: pick one of the 3 L^2 edges uniformly; equal endpoint colors are a
// no-op step, otherwise the swap is accepted with probability
// min(1, exp(-beta dH)). Glauber: pick a vertex and a color in [1, q]
// uniformly (the current color included) and accept with probability
// min(1, exp(-beta dH + h_new - h_old)).
class Chain {
 public:
  Chain(const ChainParams& params, Configuration init);

  bool step();
  bool kawasaki_step();
  bool glauber_step();

  const Configuration& configuration() const { return sigma_; }
  double energy() const { return energy_; }
  const CountsVector& counts() const { return counts_; }
  std::uint64_t steps_taken() const { return step_; }
  std::uint64_t accepted() const { return accepted_; }
  double sweeps() const { return static_cast<double>(step_) / static_cast<double>(sweep_size_); }

  double beta() const { return beta_; }
  void set_beta(double beta);

  // Recomputes the running energy from scratch.
  void resync();

  // Floating-point matrices accumulate rounding; energy is recomputed this often.
  static constexpr std::uint64_t kResyncInterval = 1'000'000;

 private:
  bool accept(double delta_energy, double field_gain);
  void rebuild_acceptance_table();
  void after_step();

  ChainParams params_;
  Configuration sigma_;
  MagneticField field_;
  Rng rng_;
  double beta_;
  double energy_ = 0.0;
  CountsVector counts_;
  std::uint64_t step_ = 0;
  std::uint64_t accepted_ = 0;
  std::uint64_t sweep_size_ = 1;
  // exp(-beta k) for integral deltas k = 0..max, when the matrix is integral
  // and there is no field.
  std::vector<double> acceptance_;
};

struct Sample {
  std::uint64_t step;
  double sweep;
  double energy;
  const CountsVector& counts;
  std::size_t boundary_size;
  const Configuration& configuration;
};

using SampleSink = std::function<void(const Sample&)>;

struct RunSummary {
  std::uint64_t steps = 0;
  std::uint64_t accepted = 0;
  std::size_t samples = 0;
  double final_energy = 0.0;
  std::optional<Configuration> final_configuration;
};

// Runs params.steps proposals from init, emitting the initial state and then
// every params.thin steps. Throws if a Kawasaki init does not match
// params.counts.
RunSummary run_chain(const ChainParams& params, Configuration init, const SampleSink& sink);

// Row-fill from params.counts (or a monochromatic state when there are none).
Configuration canonical_configuration(const ChainParams& params);
// Uniformly shuffled counts (Kawasaki) or i.i.d. uniform colors (Glauber).
Configuration random_configuration(const ChainParams& params, std::uint64_t seed);

struct Unrestricted {};
using GibbsRestriction = std::variant<Unrestricted, CountsVector, MagneticField>;

// Exact Gibbs weights over the configurations of a tiny torus, sorted by
// encode_configuration code.
struct GibbsTable {
  int side_length = 0;
  int q = 0;
  std::vector<std::uint64_t> codes;
  std::vector<double> probabilities;
  std::vector<double> energies;

  std::size_t size() const { return codes.size(); }
  std::optional<std::size_t> find(std::uint64_t code) const;
};

inline constexpr std::uint64_t kExactStateLimit = 10'000'000;

// Enumerates pi proportional to exp(-beta H) (all configurations), restricted
// to a magnetization, or exp(-beta H + h.n) with a field. Refuses when
// q^(L^2) exceeds kExactStateLimit.
GibbsTable exact_gibbs(int side_length, const CostMatrix& a, double beta, const GibbsRestriction& restriction);

// 0.5 * sum |empirical - exact|; visits[i] counts hits of table state i and
// outside counts states the table does not contain.
double total_variation(const GibbsTable& table, const std::vector<std::uint64_t>& visits, std::uint64_t outside = 0);

// Single-step transition probabilities of the two chains, computed
// analytically from the proposal and acceptance rules. Zero when `to` is not
// one legal move away from `from` (including from == to).
double kawasaki_transition_probability(const Configuration& from, const Configuration& to, const CostMatrix& a,
                                       double beta);
double glauber_transition_probability(const Configuration& from, const Configuration& to, const CostMatrix& a,
                                      double beta, const MagneticField& field);

}  // namespace gpm

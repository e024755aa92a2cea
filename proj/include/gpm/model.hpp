#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gpm/lattice.hpp"

namespace gpm {

// Colors are 1-based, matching [q] = {1, ..., q}. Serialized forms are 0-based.
using Color = std::uint8_t;
inline constexpr int kMaxColors = 255;

// Symmetric q x q interaction energies with zero diagonal and strictly
// positive off-diagonal entries.
class CostMatrix {
 public:
  // Single-color matrix (0).
  CostMatrix() : CostMatrix(std::vector<std::vector<double>>{{0.0}}) {}
  // Throws std::invalid_argument naming the violated rule.
  explicit CostMatrix(const std::vector<std::vector<double>>& entries);

  int q() const { return q_; }
  double operator()(Color i, Color j) const { return entries_[(i - 1) * q_ + (j - 1)]; }

  double min_off_diagonal() const { return a_min_; }
  double max_off_diagonal() const { return a_max_; }
  // Every entry is an integer, so energies and deltas are exact in double.
  bool is_integral() const { return integral_; }

  std::vector<std::vector<double>> rows() const;

  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

 private:
  int q_ = 0;
  std::vector<double> entries_;
  double a_min_ = 0.0;
  double a_max_ = 0.0;
  bool integral_ = true;
};

// Parses {"q": int, "entries": [[...], ...]}.
CostMatrix cost_matrix_from_json(std::string_view text);
std::string cost_matrix_to_json(const CostMatrix& a);

// Named matrices: potts, ising, blume_capel, clock, fig2a, fig2b, fig2c, fig2d.
// q = 0 selects the family's natural size (2 for ising, 3 for blume_capel, 9
// for fig2*); potts and clock need q >= 1 explicitly.
CostMatrix builtin_matrix(std::string_view name, int q = 0);
std::vector<std::string> builtin_matrix_names();

// A colouring of the torus. Holds the lattice by shared pointer so copies are
// cheap to make and independent in their colours.
class Configuration {
 public:
  Configuration(std::shared_ptr<const TorusLattice> lattice, int q, Color fill = 1);
  Configuration(std::shared_ptr<const TorusLattice> lattice, int q, std::vector<Color> colors);
  Configuration(const TorusLattice& lattice, int q, Color fill = 1)
      : Configuration(std::make_shared<const TorusLattice>(lattice), q, fill) {}
  Configuration(const TorusLattice& lattice, int q, std::vector<Color> colors)
      : Configuration(std::make_shared<const TorusLattice>(lattice), q, std::move(colors)) {}

  const TorusLattice& lattice() const { return *lattice_; }
  const std::shared_ptr<const TorusLattice>& lattice_ptr() const { return lattice_; }
  int q() const { return q_; }
  std::size_t size() const { return colors_.size(); }

  Color operator[](VertexId v) const { return colors_[v]; }
  void set(VertexId v, Color c);
  void swap_colors(VertexId u, VertexId v) { std::swap(colors_[u], colors_[v]); }
  std::span<const Color> colors() const { return colors_; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.q_ == b.q_ && *a.lattice_ == *b.lattice_ && a.colors_ == b.colors_;
  }

 private:
  std::shared_ptr<const TorusLattice> lattice_;
  int q_;
  std::vector<Color> colors_;
};

// Color densities rho in the open simplex.
class DensityVector {
 public:
  explicit DensityVector(std::vector<double> rho);
  // Normalizes nonnegative weights, e.g. (1, 1, ..., 1, 14).
  static DensityVector proportional(const std::vector<double>& weights);

  int q() const { return static_cast<int>(rho_.size()); }
  double operator[](Color c) const { return rho_[c - 1]; }
  const std::vector<double>& values() const { return rho_; }

 private:
  std::vector<double> rho_;
};

// Per-color vertex counts n(sigma), 0-based storage, 1-based access.
struct CountsVector {
  std::vector<std::int64_t> n;

  int q() const { return static_cast<int>(n.size()); }
  std::int64_t operator[](Color c) const { return n[c - 1]; }
  std::int64_t total() const;
  friend bool operator==(const CountsVector&, const CountsVector&) = default;
};

struct MagneticField {
  std::vector<double> h;

  static MagneticField zero(int q) { return {std::vector<double>(static_cast<std::size_t>(q), 0.0)}; }
  double operator[](Color c) const { return h[c - 1]; }
};

double hamiltonian(const Configuration& sigma, const CostMatrix& a);

// H(sigma with u, v exchanged) - H(sigma). u and v must be adjacent.
double swap_delta(const Configuration& sigma, const CostMatrix& a, VertexId u, VertexId v);

// H(sigma with sigma_v := c) - H(sigma).
double recolor_delta(const Configuration& sigma, const CostMatrix& a, VertexId v, Color c);

CountsVector magnetization(const Configuration& sigma);

// n_k = floor(rho_k L^2) for k < q and n_q takes the remainder. With
// require_all_colors, a zero count is rejected.
CountsVector counts_from_density(const DensityVector& rho, int side_length, bool require_all_colors = false);

// Hamiltonian of the configuration that gives every vertex its part's color.
double partition_cost(const TorusLattice& lat, std::span<const Color> labels, const CostMatrix& a);

// Number of edges whose endpoints differ in color.
std::size_t bichromatic_edge_count(const Configuration& sigma);

// Vertices in row-major order (left to right, bottom to top): the first n_1
// get color 1, the next n_2 color 2, and so on.
Configuration rowfill_configuration(std::shared_ptr<const TorusLattice> lattice, const CountsVector& counts);

namespace detail {
// Unchecked kernels for the samplers; callers guarantee adjacency and ranges.
double swap_delta_adjacent(const Configuration& sigma, const CostMatrix& a, VertexId u, VertexId v);
double recolor_delta_unchecked(const Configuration& sigma, const CostMatrix& a, VertexId v, Color c);
}  // namespace detail

}  // namespace gpm

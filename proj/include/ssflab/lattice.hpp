#pragma once

// Grids, potentials, and finite-volume Dirichlet operators on boxes
// ]-L/2, L/2[^d, plus the enumeration of allowed perturbation shifts.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace ssflab::lattice {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Uniform grid of strictly interior points of the box ]-L/2, L/2[^d.
///
/// Points are indexed lexicographically with the first axis slowest, so the
/// assembled stencil has half-bandwidth n_per_axis^(d-1).
struct GridSpec {
  int d = 1;
  double L = 1.0;
  double h = 1.0;
  int n_per_axis = 1;

  std::size_t size() const;
  /// Coordinate of interior index i (0-based) along any axis.
  double coordinate(int i) const { return -0.5 * L + (i + 1) * h; }
  /// Writes the coordinates of flat point `index` into `out` (size d).
  void point(std::size_t index, std::span<double> out) const;
  std::vector<double> point(std::size_t index) const;
};

GridSpec build_grid(int d, double L, double h);

enum class PotentialKind { PeriodicBackground, CompactPerturbation };

/// A bounded potential given by a closed-form evaluator.
///
/// Backgrounds carry a period vector; perturbations carry the half-width of
/// their support cube and a translation. The evaluator is applied as
/// base(x - shift), so shifting never touches the closed form.
class PotentialField {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  static PotentialField background(int d, Evaluator base,
                                   std::vector<double> period, double lower,
                                   double upper, std::string tag);
  static PotentialField perturbation(int d, Evaluator base,
                                     double support_half_width, double lower,
                                     double upper, std::string tag);

  double operator()(std::span<const double> x) const;

  PotentialKind kind() const { return kind_; }
  int dimension() const { return d_; }
  const std::vector<double>& period() const { return period_; }
  double support_half_width() const { return support_half_width_; }
  const std::vector<double>& shift() const { return shift_; }
  /// Declared range: lower() <= value <= upper() everywhere.
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  /// max |value|.
  double bound() const;
  const std::string& tag() const { return tag_; }
  /// True for fields that are identically zero (evaluator never consulted).
  bool is_zero() const { return lower_ == 0.0 && upper_ == 0.0; }
  /// True for constant backgrounds, which are periodic for every period.
  bool is_translation_invariant() const { return translation_invariant_; }
  /// True iff x lies in the closed support cube of the (shifted) field.
  bool in_support_box(std::span<const double> x) const;

  /// The same field evaluated at the nearest point of the lattice h*Z^d.
  /// This is the continuum potential seen by a grid operator with mesh h.
  PotentialField sampled_on_lattice(double h) const;

 private:
  friend PotentialField shift_potential(const PotentialField&,
                                        std::span<const double>);
  friend PotentialField zero_background(int);
  friend PotentialField constant_background(int, double);
  PotentialKind kind_ = PotentialKind::PeriodicBackground;
  int d_ = 1;
  Evaluator base_;
  std::vector<double> period_;
  double support_half_width_ = 0.0;
  std::vector<double> shift_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  bool translation_invariant_ = false;
  std::string tag_;
};

/// V_y := V(. - y). Only perturbations can be shifted.
PotentialField shift_potential(const PotentialField& V,
                               std::span<const double> y);

// Closed-form factories.
PotentialField zero_background(int d);
PotentialField constant_background(int d, double value);
/// amplitude * prod_j sum_k coefficients[k] cos(2 pi k x_j / period_j).
PotentialField cosine_background(int d, double amplitude,
                                 std::vector<double> coefficients,
                                 std::vector<double> period);
/// amplitude * indicator of the open cube ]-ell/2, ell/2[^d.
PotentialField box_indicator(int d, double amplitude, double ell);
/// amplitude * prod_j exp(1 - 1/(1 - u_j^2)), u_j = 2 x_j / ell, on the open cube.
PotentialField smooth_bump(int d, double amplitude, double ell);

/// Sparse symmetric discretization of -1/2 Laplacian + U + V with Dirichlet
/// boundary conditions on the grid's box.
class DirichletOperator {
 public:
  DirichletOperator(GridSpec grid, SparseMatrix matrix, std::string tag);

  const GridSpec& grid() const { return grid_; }
  const SparseMatrix& matrix() const { return matrix_; }
  const std::string& potential_tag() const { return tag_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  double entry(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;
  /// Gershgorin interval containing the whole spectrum.
  std::pair<double, double> gershgorin_bounds() const;

 private:
  GridSpec grid_;
  SparseMatrix matrix_;
  std::string tag_;
};

/// Assembles H = -1/2 Delta_h + U + V; either potential may be absent (null).
DirichletOperator assemble_operator(const GridSpec& grid,
                                    const PotentialField* U,
                                    const PotentialField* V);

/// Security distance D(L).
struct SecurityDistance {
  std::function<double(double)> fn;
  std::string description;
  double operator()(double L) const { return fn(L); }

  /// D(L) = 1/2 log(L - ell + 1).
  static SecurityDistance log_half(double ell);
  /// D(L) = fraction * (L - ell) / 2, 0 <= fraction <= 1.
  static SecurityDistance linear_fraction(double ell, double fraction);
};

/// The allowed shifts A_L(x0) for one box size.
struct ShiftSet {
  std::vector<double> x0;
  std::vector<std::vector<double>> shifts;
  std::vector<std::vector<long>> multi_indices;
  double L = 0.0;
  double D_of_L = 0.0;

  bool empty() const { return shifts.empty(); }
  std::size_t size() const { return shifts.size(); }
};

/// Lattice translates y = x0 + p*k whose cube Lambda_ell(y) keeps distance
/// strictly greater than D(L) from the complement of Lambda_L. Enumerated in
/// lexicographic order of the integer multi-index k.
ShiftSet allowed_shifts(std::span<const double> x0, double L,
                        std::span<const double> period, double ell,
                        const SecurityDistance& D);

/// Distance from the cube Lambda_ell(y) to R^d minus Lambda_L.
double boundary_distance(std::span<const double> y, double ell, double L);

}  // namespace ssflab::lattice

#pragma once
// Cosine (Neumann) spectral basis on a 1d or 2d box, midpoint collocation,
// and the Galerkin operators built on it. Coefficients are stored in a
// single vector ordered by nondecreasing eigenvalue.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace sch {

struct SpectralGrid {
  int dim = 1;
  int n = 0;     // retained modes per axis
  int ncol = 0;  // collocation points per axis, >= 3n/2
  std::array<double, 2> length{1.0, 1.0};
  double w = 0.0;  // midpoint quadrature weight per point

  struct Mode {
    int j0 = 0, j1 = 0;
    double alpha = 0.0;
  };
  std::vector<Mode> modes;            // sorted by alpha
  Eigen::VectorXd alpha;              // alpha per sorted mode
  std::vector<int> sorted_of_tensor;  // j0 + n*j1 -> sorted position

  // per-axis tables at the midpoints; both include the L^2 normalisation
  std::array<Eigen::MatrixXd, 2> E;  // e_j(x_i), ncol x n
  std::array<Eigen::MatrixXd, 2> D;  // e_j'(x_i), ncol x n
  std::array<Eigen::VectorXd, 2> axis_alpha;
  std::array<Eigen::VectorXd, 2> xcol;
  std::array<Eigen::VectorXd, 2> norm;

  int num_modes() const { return static_cast<int>(modes.size()); }
  int num_points() const { return dim == 1 ? ncol : ncol * ncol; }
  double volume() const { return dim == 1 ? length[0] : length[0] * length[1]; }
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr build_grid(int dim, std::array<double, 2> length, int n,
                   double oversample = 1.5);

struct SpectralField {
  GridPtr grid;
  Eigen::VectorXd a;

  double l2_norm() const { return a.norm(); }
  double mean() const;             // a_0 / sqrt(|O|)
  double h1_seminorm_sq() const;   // int |grad phi|^2 = sum alpha a^2
};

SpectralField zero_field(const GridPtr& g);

// synthesis/analysis. The fast pair routes each axis through an FFT; the
// naive pair is the direct matrix transform kept as a reference.
Eigen::ArrayXd to_values(const SpectralField& f);
Eigen::ArrayXd to_values_naive(const SpectralField& f);
SpectralField to_coeffs(const GridPtr& g, const Eigen::ArrayXd& vals);
SpectralField to_coeffs_naive(const GridPtr& g, const Eigen::ArrayXd& vals);

SpectralField laplacian(const SpectralField& f);

// pointwise gradient on the collocation grid, one array per axis
std::array<Eigen::ArrayXd, 2> grad_values(const SpectralField& f);

// Galerkin coefficients of div(p) from pointwise flux components:
// out_m = -w * sum_x p(x) . grad e_m(x). The zero mode vanishes exactly.
SpectralField flux_divergence(const GridPtr& g,
                              const std::array<Eigen::ArrayXd, 2>& p);

// div(m(phi) grad mu) projected onto the retained modes
SpectralField degenerate_flux(const SpectralField& phi,
                              const SpectralField& mu,
                              const std::function<double(double)>& m_of_r);

// L^2 distance between fields on nested grids (same box, n_small <= n_big)
double nested_l2_diff(const SpectralField& big, const SpectralField& small);

}  // namespace sch

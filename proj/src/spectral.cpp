#include "sch/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace sch {

namespace {

// X_k = sum_i v_i cos(pi k (2i+1) / (2N)) for k < nout, via a length-4N FFT
Eigen::VectorXd dct_analysis(const Eigen::Ref<const Eigen::VectorXd>& v,
                             int nout) {
  thread_local Eigen::FFT<double> fft;
  const int N = static_cast<int>(v.size());
  std::vector<std::complex<double>> z(4 * N, {0.0, 0.0}), Z;
  for (int i = 0; i < N; ++i) {
    z[2 * i + 1] = v[i];
    z[4 * N - 2 * i - 1] = v[i];
  }
  fft.fwd(Z, z);
  Eigen::VectorXd out(nout);
  for (int k = 0; k < nout; ++k) out[k] = 0.5 * Z[k].real();
  return out;
}

// v_i = sum_k u_k cos(pi k (2i+1) / (2N)) for i < N
Eigen::VectorXd dct_synthesis(const Eigen::Ref<const Eigen::VectorXd>& u,
                              int N) {
  thread_local Eigen::FFT<double> fft;
  std::vector<std::complex<double>> z(4 * N, {0.0, 0.0}), Z;
  for (int k = 0; k < u.size(); ++k) z[k] = u[k];
  fft.fwd(Z, z);
  Eigen::VectorXd out(N);
  for (int i = 0; i < N; ++i) out[i] = Z[2 * i + 1].real();
  return out;
}

// scatter sorted coefficients into the (n x n) tensor layout, norms folded in
Eigen::MatrixXd tensor_of_sorted(const SpectralGrid& g,
                                 const Eigen::VectorXd& a, bool with_norm) {
  const int n = g.n;
  const int n1 = g.dim == 2 ? n : 1;
  Eigen::MatrixXd C(n, n1);
  for (int j1 = 0; j1 < n1; ++j1)
    for (int j0 = 0; j0 < n; ++j0) {
      double v = a[g.sorted_of_tensor[j0 + n * j1]];
      if (with_norm) v *= g.norm[0][j0] * (g.dim == 2 ? g.norm[1][j1] : 1.0);
      C(j0, j1) = v;
    }
  return C;
}

Eigen::VectorXd sorted_of_tensor_mat(const SpectralGrid& g,
                                     const Eigen::MatrixXd& C,
                                     bool with_norm) {
  const int n = g.n;
  const int n1 = g.dim == 2 ? n : 1;
  Eigen::VectorXd a(g.num_modes());
  for (int j1 = 0; j1 < n1; ++j1)
    for (int j0 = 0; j0 < n; ++j0) {
      double v = C(j0, j1);
      if (with_norm) v *= g.norm[0][j0] * (g.dim == 2 ? g.norm[1][j1] : 1.0);
      a[g.sorted_of_tensor[j0 + n * j1]] = v;
    }
  return a;
}

}  // namespace

GridPtr build_grid(int dim, std::array<double, 2> length, int n,
                   double oversample) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("grid: dim must be 1 or 2");
  if (n < 1) throw std::invalid_argument("grid: need at least one mode");
  for (int ax = 0; ax < dim; ++ax)
    if (!(length[ax] > 0.0))
      throw std::invalid_argument("grid: lengths must be positive");
  if (!(oversample >= 1.5))
    throw std::invalid_argument("grid: oversample must be >= 3/2");

  auto g = std::make_shared<SpectralGrid>();
  g->dim = dim;
  g->n = n;
  g->length = length;
  g->ncol = static_cast<int>(std::ceil(oversample * n));
  const int N = g->ncol;
  g->w = (dim == 1 ? length[0] / N : length[0] * length[1] / (N * N));

  for (int ax = 0; ax < dim; ++ax) {
    const double L = length[ax];
    g->xcol[ax].resize(N);
    for (int i = 0; i < N; ++i) g->xcol[ax][i] = (i + 0.5) * L / N;
    g->norm[ax].resize(n);
    g->axis_alpha[ax].resize(n);
    g->E[ax].resize(N, n);
    g->D[ax].resize(N, n);
    for (int j = 0; j < n; ++j) {
      const double nrm = j == 0 ? 1.0 / std::sqrt(L) : std::sqrt(2.0 / L);
      const double kj = j * M_PI / L;
      g->norm[ax][j] = nrm;
      g->axis_alpha[ax][j] = kj * kj;
      for (int i = 0; i < N; ++i) {
        g->E[ax](i, j) = nrm * std::cos(kj * g->xcol[ax][i]);
        g->D[ax](i, j) = -nrm * kj * std::sin(kj * g->xcol[ax][i]);
      }
    }
  }

  const int n1 = dim == 2 ? n : 1;
  g->modes.reserve(static_cast<size_t>(n) * n1);
  for (int j1 = 0; j1 < n1; ++j1)
    for (int j0 = 0; j0 < n; ++j0) {
      SpectralGrid::Mode m;
      m.j0 = j0;
      m.j1 = j1;
      m.alpha = g->axis_alpha[0][j0] + (dim == 2 ? g->axis_alpha[1][j1] : 0.0);
      g->modes.push_back(m);
    }
  std::stable_sort(g->modes.begin(), g->modes.end(),
                   [](const SpectralGrid::Mode& a, const SpectralGrid::Mode& b) {
                     if (a.alpha != b.alpha) return a.alpha < b.alpha;
                     if (a.j1 != b.j1) return a.j1 < b.j1;
                     return a.j0 < b.j0;
                   });
  g->alpha.resize(g->num_modes());
  g->sorted_of_tensor.assign(g->modes.size(), 0);
  for (int s = 0; s < g->num_modes(); ++s) {
    g->alpha[s] = g->modes[s].alpha;
    g->sorted_of_tensor[g->modes[s].j0 + n * g->modes[s].j1] = s;
  }
  return g;
}

double SpectralField::mean() const { return a[0] / std::sqrt(grid->volume()); }

double SpectralField::h1_seminorm_sq() const {
  return grid->alpha.dot(a.cwiseProduct(a));
}

SpectralField zero_field(const GridPtr& g) {
  SpectralField f;
  f.grid = g;
  f.a = Eigen::VectorXd::Zero(g->num_modes());
  return f;
}

Eigen::ArrayXd to_values(const SpectralField& f) {
  const SpectralGrid& g = *f.grid;
  const int N = g.ncol;
  const Eigen::MatrixXd C = tensor_of_sorted(g, f.a, /*with_norm=*/true);
  if (g.dim == 1) return dct_synthesis(C.col(0), N).array();
  // axis 0 then axis 1
  Eigen::MatrixXd T(N, g.n);
  for (int j1 = 0; j1 < g.n; ++j1) T.col(j1) = dct_synthesis(C.col(j1), N);
  Eigen::MatrixXd V(N, N);
  for (int i0 = 0; i0 < N; ++i0)
    V.row(i0) = dct_synthesis(T.row(i0).transpose(), N).transpose();
  return Eigen::Map<const Eigen::ArrayXd>(V.data(), N * N);
}

Eigen::ArrayXd to_values_naive(const SpectralField& f) {
  const SpectralGrid& g = *f.grid;
  const Eigen::MatrixXd C = tensor_of_sorted(g, f.a, /*with_norm=*/false);
  if (g.dim == 1) return (g.E[0] * C.col(0)).array();
  Eigen::MatrixXd V = g.E[0] * C * g.E[1].transpose();
  return Eigen::Map<const Eigen::ArrayXd>(V.data(), g.ncol * g.ncol);
}

SpectralField to_coeffs(const GridPtr& gp, const Eigen::ArrayXd& vals) {
  const SpectralGrid& g = *gp;
  const int N = g.ncol;
  if (vals.size() != g.num_points())
    throw std::invalid_argument("to_coeffs: value size mismatch");
  SpectralField f;
  f.grid = gp;
  if (g.dim == 1) {
    const Eigen::VectorXd X = dct_analysis(vals.matrix(), g.n);
    Eigen::MatrixXd C = X * g.w;
    f.a = sorted_of_tensor_mat(g, C, /*with_norm=*/true);
    return f;
  }
  const Eigen::Map<const Eigen::MatrixXd> V(vals.data(), N, N);
  Eigen::MatrixXd T(g.n, N);
  for (int i1 = 0; i1 < N; ++i1) T.col(i1) = dct_analysis(V.col(i1), g.n);
  Eigen::MatrixXd C(g.n, g.n);
  for (int j0 = 0; j0 < g.n; ++j0)
    C.row(j0) = dct_analysis(T.row(j0).transpose(), g.n).transpose();
  C *= g.w;
  f.a = sorted_of_tensor_mat(g, C, /*with_norm=*/true);
  return f;
}

SpectralField to_coeffs_naive(const GridPtr& gp, const Eigen::ArrayXd& vals) {
  const SpectralGrid& g = *gp;
  if (vals.size() != g.num_points())
    throw std::invalid_argument("to_coeffs: value size mismatch");
  SpectralField f;
  f.grid = gp;
  if (g.dim == 1) {
    Eigen::MatrixXd C = g.w * (g.E[0].transpose() * vals.matrix());
    f.a = sorted_of_tensor_mat(g, C, /*with_norm=*/false);
    return f;
  }
  const Eigen::Map<const Eigen::MatrixXd> V(vals.data(), g.ncol, g.ncol);
  Eigen::MatrixXd C = g.w * (g.E[0].transpose() * V * g.E[1]);
  f.a = sorted_of_tensor_mat(g, C, /*with_norm=*/false);
  return f;
}

SpectralField laplacian(const SpectralField& f) {
  SpectralField out;
  out.grid = f.grid;
  out.a = -f.grid->alpha.cwiseProduct(f.a);
  return out;
}

std::array<Eigen::ArrayXd, 2> grad_values(const SpectralField& f) {
  const SpectralGrid& g = *f.grid;
  const Eigen::MatrixXd C = tensor_of_sorted(g, f.a, /*with_norm=*/false);
  std::array<Eigen::ArrayXd, 2> out;
  if (g.dim == 1) {
    out[0] = (g.D[0] * C.col(0)).array();
    return out;
  }
  Eigen::MatrixXd G0 = g.D[0] * C * g.E[1].transpose();
  Eigen::MatrixXd G1 = g.E[0] * C * g.D[1].transpose();
  out[0] = Eigen::Map<const Eigen::ArrayXd>(G0.data(), g.ncol * g.ncol);
  out[1] = Eigen::Map<const Eigen::ArrayXd>(G1.data(), g.ncol * g.ncol);
  return out;
}

SpectralField flux_divergence(const GridPtr& gp,
                              const std::array<Eigen::ArrayXd, 2>& p) {
  const SpectralGrid& g = *gp;
  SpectralField out;
  out.grid = gp;
  if (g.dim == 1) {
    Eigen::MatrixXd C = -g.w * (g.D[0].transpose() * p[0].matrix());
    out.a = sorted_of_tensor_mat(g, C, /*with_norm=*/false);
    return out;
  }
  const Eigen::Map<const Eigen::MatrixXd> P0(p[0].data(), g.ncol, g.ncol);
  const Eigen::Map<const Eigen::MatrixXd> P1(p[1].data(), g.ncol, g.ncol);
  Eigen::MatrixXd C = -g.w * (g.D[0].transpose() * P0 * g.E[1] +
                              g.E[0].transpose() * P1 * g.D[1]);
  out.a = sorted_of_tensor_mat(g, C, /*with_norm=*/false);
  return out;
}

SpectralField degenerate_flux(const SpectralField& phi,
                              const SpectralField& mu,
                              const std::function<double(double)>& m_of_r) {
  const Eigen::ArrayXd vals = to_values(phi);
  auto gmu = grad_values(mu);
  Eigen::ArrayXd mvals(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) mvals[i] = m_of_r(vals[i]);
  std::array<Eigen::ArrayXd, 2> p;
  p[0] = mvals * gmu[0];
  if (phi.grid->dim == 2) p[1] = mvals * gmu[1];
  return flux_divergence(phi.grid, p);
}

double nested_l2_diff(const SpectralField& big, const SpectralField& small) {
  const SpectralGrid& gb = *big.grid;
  const SpectralGrid& gs = *small.grid;
  if (gs.n > gb.n || gs.dim != gb.dim)
    throw std::invalid_argument("nested_l2_diff: grids are not nested");
  double acc = 0.0;
  for (int s = 0; s < gb.num_modes(); ++s) {
    const auto& m = gb.modes[s];
    double other = 0.0;
    if (m.j0 < gs.n && m.j1 < (gs.dim == 2 ? gs.n : 1))
      other = small.a[gs.sorted_of_tensor[m.j0 + gs.n * m.j1]];
    const double d = big.a[s] - other;
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace sch

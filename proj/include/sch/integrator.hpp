#pragma once
// Time integration of the spectral coefficient SDE
//   d a = P[div(m(phi) grad mu)] dt + P[G(phi) dW],
//   mu = -Delta phi + P F_reg'(phi),
// by a stabilized IMEX Euler-Maruyama step: the biharmonic surrogate
// kappa Delta^2 is treated implicitly (diagonal in the eigenbasis), the
// variable-mobility flux and the potential explicitly. Two pipelines:
// a lambda-smoothed potential with positive mobility, or an eps-truncated
// potential with the matching truncated mobility and noise.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sch/mobility.hpp"
#include "sch/noise.hpp"
#include "sch/potential.hpp"
#include "sch/spectral.hpp"

namespace sch {

enum class InitKind { Constant, Cosine, UniformRandom };

struct InitSpec {
  InitKind kind = InitKind::Constant;
  double value = 0.0;      // constant preset
  double amplitude = 0.1;  // cosine / uniform_random presets
  int mode = 1;            // cosine preset, axis-0 mode index

  static InitSpec constant(double value);
  static InitSpec cosine(double amplitude, int mode);
  static InitSpec uniform_random(double amplitude);
};

// The uniform_random preset draws one coefficient per mode from the shared
// init stream, damped by (1 + alpha)^(-3/2), so refining the grid extends
// the same field instead of redrawing it.
SpectralField initial_field(const GridPtr& g, const InitSpec& init,
                            uint64_t seed);

struct SolverConfig {
  GridPtr grid;
  RegularizedPotential reg;              // carries the origin potential
  MobilitySpec mob;                      // origin mobility
  std::optional<TruncatedMobility> tmob;  // engaged by the eps pipeline
  NoiseSpec noise;
  InitSpec init;
  double T = 0.1;
  double dt = 1e-4;
  double kappa = -1.0;  // < 0: defaults to sup m
  int record_every = 10;
  uint64_t seed = 12345;
  bool keep_fields = false;  // store coefficients in every record

  double effective_kappa() const;
  double mob_at(double r) const;  // m or m_eps depending on pipeline
};

// Pipeline invariants: exactly one of
//   Lambda potential + mobility bounded away from zero + plain noise,
//   Eps potential + truncated mobility + eps-truncated noise (same eps),
// and for the eps pipeline sup|phi_0| < 1 - eps on the collocation grid.
// Throws std::invalid_argument with the violated constraint.
void validate(const SolverConfig& c);

struct StateRecord {
  double t = 0.0;
  double mass = 0.0;    // mean value (phi)_O
  double energy = 0.0;  // 1/2 |grad phi|^2 + int F_reg(phi)
  // running time integrals, left-endpoint quadrature
  double dissipation_acc = 0.0;  // int m |grad mu|^2
  double grad_int_acc = 0.0;     // int |grad phi|^2
  double ito_F_acc = 0.0;        // int sum_k int F_reg''(phi) g_k(phi)^2
  double ito_M_acc = 0.0;        // same with M_eps'' (eps pipeline)
  double noise_grad_acc = 0.0;   // int sum_k |grad P g_k(phi)|^2
  double stoch_acc = 0.0;        // sum (mu, P G(phi) dW)
  // instantaneous diagnostics
  double entropy = 0.0;  // int M_eps(phi), eps pipeline only
  double sup_abs_phi = 0.0;
  double confinement_l2 = 0.0;  // ||(|phi|-1)_+||_{L^2}
  double grad_norm_sq = 0.0;
  double F_l1 = 0.0;  // int |F_reg(phi)|
  Eigen::VectorXd phi;  // coefficients, when keep_fields
};

struct PathState {
  SpectralField phi;
  double t = 0.0;
  long step_index = 0;
  double dissipation_acc = 0.0;
  double grad_int_acc = 0.0;
  double ito_F_acc = 0.0;
  double ito_M_acc = 0.0;
  double noise_grad_acc = 0.0;
  double stoch_acc = 0.0;
  // shadow of the zero coefficient, advanced by exactly the same additions;
  // the drift never touches mode 0, so phi.a[0] == mass_ledger bitwise
  double mass_ledger = 0.0;
  double sup_abs_mass = 0.0;  // running sup of |(phi)_O|, every step
};

// mu = -Delta phi + P_n F_reg'(phi), pseudo-spectral with the grid's
// built-in dealiasing margin
SpectralField chemical_potential(const SpectralField& phi,
                                 const RegularizedPotential& reg);

// div(m(phi) grad mu); the zero coefficient is structurally exact zero
SpectralField drift(const SpectralField& phi, const RegularizedPotential& reg,
                    const std::function<double(double)>& m_of_r);

double energy(const SpectralField& phi, const RegularizedPotential& reg);

// Brownian increments addressed by (seed, path, step, mode). A run at a
// coarser step consumes dyadic sums of base increments, so refinement
// chains dt, dt/2, dt/4, ... share one Brownian path bitwise.
struct NoiseDraws {
  uint64_t seed = 0;
  uint64_t path = 0;
  double base_dt = 0.0;
  int K = 0;

  Eigen::VectorXd increment(long i) const;  // over [i, i+1) * base_dt
  Eigen::VectorXd increment_sum(long i0, long i1) const;
};

// one time step; tallies are accumulated at the left endpoint before the
// state moves. dW holds the K Brownian increments over [t, t+dt].
void step(PathState& st, const SolverConfig& c, double dt,
          const Eigen::VectorXd& dW);

struct PathResult {
  std::vector<StateRecord> records;
  PathState final_state;
};

// base_dt <= c.dt with c.dt an integer multiple (0: base_dt = c.dt);
// records at t=0, every record_every steps, and the final time.
// Deterministic given (c.seed, path_index).
PathResult simulate_path(const SolverConfig& c, uint64_t path_index,
                         double base_dt = 0.0);

}  // namespace sch

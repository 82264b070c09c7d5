#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "tvcons/dynamics.h"

namespace tvcons {

/// Graph Laplacian: zero row sums, non-positive off-diagonal entries.
class Laplacian {
 public:
  static constexpr double kRowTol = 1e-10;

  /// Throws kInvalidArgument when the matrix is not square, a row sum exceeds
  /// `tol` in magnitude, or an off-diagonal entry exceeds `tol`.
  explicit Laplacian(MatrixXd l, double tol = kRowTol);

  static Laplacian Zero(int agents);

  /// Undirected Laplacian from weighted edges (i, j, a_ij), 0-based nodes.
  static Laplacian FromUndirectedEdges(
      int agents, const std::vector<std::tuple<int, int, double>>& edges);

  int agents() const { return static_cast<int>(l_.rows()); }
  const MatrixXd& matrix() const { return l_; }

 private:
  MatrixXd l_;
};

enum class ScheduleKind {
  kConstant,
  kPeriodic,       // L(k) = palette[k mod P]
  kDwellSwitched,  // each palette entry held for `dwell` steps, then the next
  kRandomUniform,  // palette entry drawn uniformly per step from (seed, k)
  kSparse,         // L(sκ) = palette[κ mod P], zero in between
  kCustom,         // cyclic table of palette indices; -1 means no edges
};

std::string_view ToString(ScheduleKind kind);

/// Rule producing L(k) for every k ≥ 0. Immutable; At() is pure and
/// thread-safe (the random kind hashes (seed, k) instead of advancing state).
class LaplacianSchedule {
 public:
  static LaplacianSchedule Constant(Laplacian l);
  static LaplacianSchedule Periodic(std::vector<Laplacian> palette);
  static LaplacianSchedule DwellSwitched(std::vector<Laplacian> palette, int dwell);
  static LaplacianSchedule RandomUniform(std::vector<Laplacian> palette,
                                         std::uint64_t seed);
  static LaplacianSchedule Sparse(std::vector<Laplacian> palette, int stride);
  static LaplacianSchedule Custom(std::vector<Laplacian> palette,
                                  std::vector<int> table);

  const MatrixXd& At(long k) const;

  /// Index into the palette used at step k; -1 when L(k) = 0.
  int PaletteIndex(long k) const;

  /// Smallest period for the deterministic kinds; nullopt for random.
  std::optional<long> Period() const;

  ScheduleKind kind() const { return kind_; }
  int agents() const { return agents_; }
  const std::vector<Laplacian>& palette() const { return palette_; }
  int dwell() const { return dwell_; }
  int stride() const { return stride_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<int>& table() const { return table_; }

 private:
  LaplacianSchedule(ScheduleKind kind, std::vector<Laplacian> palette);

  ScheduleKind kind_;
  std::vector<Laplacian> palette_;
  int agents_ = 0;
  int dwell_ = 1;
  int stride_ = 1;
  std::uint64_t seed_ = 0;
  std::vector<int> table_;
  MatrixXd zero_;
};

/// (1/T_c) Σ_{i=0}^{T_c-1} L(k+i).
MatrixXd AverageLaplacian(const LaplacianSchedule& schedule, long k, int window);

/// Second-smallest eigenvalue modulus (eigenvalues ordered by |λ|).
double Lambda2Modulus(const MatrixXd& laplacian);

struct ConnectivityReport {
  int window = 0;
  std::vector<double> lambda2;  // indexed by window start k
  double min_lambda2 = 0.0;
  long argmin_k = 0;
  long scanned_starts = 0;
  bool periodic_shortcut = false;  // true: one period scanned, verdict exact
  bool uniformly_connected = false;
};

struct ConnectivityOptions {
  double tol_conn = 1e-9;
};

/// Scans |λ₂| of the window average for k = 0..horizon-window (or one period
/// when the schedule is periodic).
ConnectivityReport CheckUniformConnectivity(const LaplacianSchedule& schedule,
                                            int window, long horizon,
                                            const ConnectivityOptions& opts = {});

struct AssumptionLReport {
  double mu = 0.0;
  double mu_bar = std::numeric_limits<double>::infinity();
  bool unconstrained = true;  // no tested L(k) restricts μ̄
  long argmin_k = 0;  // palette index for random schedules
  long tested_steps = 0;
  bool exhaustive = false;
  bool holds = false;  // 0 < μ < μ̄(1 - tol_psd)
};

struct AssumptionLOptions {
  double tol_psd = 1e-9;
  double range_reg = 1e-12;  // eigenvalues of L'L below reg·max are dropped
};

/// Largest μ̄ with L+L' - μ̄ L'L ⪰ 0 for one Laplacian; +inf when L = 0 and
/// 0 when no positive μ̄ works.
double MuBarFor(const MatrixXd& laplacian, const AssumptionLOptions& opts = {});

/// Minimum of MuBarFor over the tested steps (palette entries for random
/// schedules, one period for periodic ones, else k < horizon). Throws
/// kAssumptionLViolated when μ̄ ≤ 0 at some step.
AssumptionLReport CheckAssumptionL(const LaplacianSchedule& schedule,
                                   long horizon, double mu,
                                   const AssumptionLOptions& opts = {});

struct ReducedLaplacian {
  MatrixXd Lhat;  // V̂' L V̂
  Eigen::RowVectorXd ell;  // v1' L V̂
};

ReducedLaplacian ReduceLaplacian(const MatrixXd& laplacian,
                                 const ReductionBasis& basis);

}  // namespace tvcons

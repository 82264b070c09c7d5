#include "tvcons/graphs.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tvcons/errors.h"
#include "tvcons/linalg.h"

namespace tvcons {

Laplacian::Laplacian(MatrixXd l, double tol) : l_(std::move(l)) {
  if (l_.rows() < 1 || l_.rows() != l_.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "Laplacian must be square");
  }
  const double row_sum = l_.rowwise().sum().cwiseAbs().maxCoeff();
  if (row_sum > tol) {
    std::ostringstream msg;
    msg << "Laplacian row sum " << row_sum << " exceeds " << tol;
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }
  for (Eigen::Index i = 0; i < l_.rows(); ++i) {
    for (Eigen::Index j = 0; j < l_.cols(); ++j) {
      if (i != j && l_(i, j) > tol) {
        std::ostringstream msg;
        msg << "Laplacian off-diagonal entry (" << i << "," << j
            << ") = " << l_(i, j) << " is positive";
        throw Error(ErrorKind::kInvalidArgument, msg.str());
      }
    }
  }
}

Laplacian Laplacian::Zero(int agents) {
  return Laplacian(MatrixXd::Zero(agents, agents));
}

Laplacian Laplacian::FromUndirectedEdges(
    int agents, const std::vector<std::tuple<int, int, double>>& edges) {
  MatrixXd l = MatrixXd::Zero(agents, agents);
  for (const auto& [i, j, w] : edges) {
    if (i < 0 || j < 0 || i >= agents || j >= agents || i == j || w < 0) {
      throw Error(ErrorKind::kInvalidArgument, "bad edge in Laplacian");
    }
    l(i, j) -= w;
    l(j, i) -= w;
    l(i, i) += w;
    l(j, j) += w;
  }
  return Laplacian(std::move(l));
}

std::string_view ToString(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kPeriodic: return "periodic";
    case ScheduleKind::kDwellSwitched: return "dwell";
    case ScheduleKind::kRandomUniform: return "random";
    case ScheduleKind::kSparse: return "sparse";
    case ScheduleKind::kCustom: return "custom";
  }
  return "unknown";
}

LaplacianSchedule::LaplacianSchedule(ScheduleKind kind, std::vector<Laplacian> palette)
    : kind_(kind), palette_(std::move(palette)) {
  if (palette_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "schedule palette is empty");
  }
  agents_ = palette_.front().agents();
  for (const auto& l : palette_) {
    if (l.agents() != agents_) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "palette Laplacians have different sizes");
    }
  }
  zero_ = MatrixXd::Zero(agents_, agents_);
}

LaplacianSchedule LaplacianSchedule::Constant(Laplacian l) {
  return LaplacianSchedule(ScheduleKind::kConstant, {std::move(l)});
}

LaplacianSchedule LaplacianSchedule::Periodic(std::vector<Laplacian> palette) {
  return LaplacianSchedule(ScheduleKind::kPeriodic, std::move(palette));
}

LaplacianSchedule LaplacianSchedule::DwellSwitched(std::vector<Laplacian> palette,
                                                   int dwell) {
  if (dwell < 1) throw Error(ErrorKind::kInvalidArgument, "dwell must be ≥ 1");
  LaplacianSchedule s(ScheduleKind::kDwellSwitched, std::move(palette));
  s.dwell_ = dwell;
  return s;
}

LaplacianSchedule LaplacianSchedule::RandomUniform(std::vector<Laplacian> palette,
                                                   std::uint64_t seed) {
  LaplacianSchedule s(ScheduleKind::kRandomUniform, std::move(palette));
  s.seed_ = seed;
  return s;
}

LaplacianSchedule LaplacianSchedule::Sparse(std::vector<Laplacian> palette,
                                            int stride) {
  if (stride < 1) throw Error(ErrorKind::kInvalidArgument, "stride must be ≥ 1");
  LaplacianSchedule s(ScheduleKind::kSparse, std::move(palette));
  s.stride_ = stride;
  return s;
}

LaplacianSchedule LaplacianSchedule::Custom(std::vector<Laplacian> palette,
                                            std::vector<int> table) {
  LaplacianSchedule s(ScheduleKind::kCustom, std::move(palette));
  if (table.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "custom schedule table is empty");
  }
  for (int idx : table) {
    if (idx < -1 || idx >= static_cast<int>(s.palette_.size())) {
      throw Error(ErrorKind::kInvalidArgument,
                  "custom schedule index out of palette range");
    }
  }
  s.table_ = std::move(table);
  return s;
}

namespace {
// SplitMix64 finalizer; turns (seed, k) into an independent 64-bit draw.
std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

int LaplacianSchedule::PaletteIndex(long k) const {
  if (k < 0) throw Error(ErrorKind::kInvalidArgument, "negative time index");
  const long p = static_cast<long>(palette_.size());
  switch (kind_) {
    case ScheduleKind::kConstant:
      return 0;
    case ScheduleKind::kPeriodic:
      return static_cast<int>(k % p);
    case ScheduleKind::kDwellSwitched:
      return static_cast<int>((k / dwell_) % p);
    case ScheduleKind::kRandomUniform: {
      const std::uint64_t draw = Mix(seed_ ^ Mix(static_cast<std::uint64_t>(k)));
      // Lemire-style range reduction; the bias is far below anything observable.
      return static_cast<int>(
          (static_cast<unsigned __int128>(draw) * static_cast<std::uint64_t>(p)) >> 64);
    }
    case ScheduleKind::kSparse:
      return k % stride_ == 0 ? static_cast<int>((k / stride_) % p) : -1;
    case ScheduleKind::kCustom:
      return table_[k % static_cast<long>(table_.size())];
  }
  return -1;
}

const MatrixXd& LaplacianSchedule::At(long k) const {
  const int idx = PaletteIndex(k);
  return idx < 0 ? zero_ : palette_[idx].matrix();
}

std::optional<long> LaplacianSchedule::Period() const {
  const long p = static_cast<long>(palette_.size());
  switch (kind_) {
    case ScheduleKind::kConstant: return 1;
    case ScheduleKind::kPeriodic: return p;
    case ScheduleKind::kDwellSwitched: return p * dwell_;
    case ScheduleKind::kRandomUniform: return std::nullopt;
    case ScheduleKind::kSparse: return p * stride_;
    case ScheduleKind::kCustom: return static_cast<long>(table_.size());
  }
  return std::nullopt;
}

MatrixXd AverageLaplacian(const LaplacianSchedule& schedule, long k, int window) {
  if (window < 1) throw Error(ErrorKind::kInvalidArgument, "window T_c must be ≥ 1");
  MatrixXd sum = MatrixXd::Zero(schedule.agents(), schedule.agents());
  for (int i = 0; i < window; ++i) sum += schedule.At(k + i);
  return sum / static_cast<double>(window);
}

double Lambda2Modulus(const MatrixXd& laplacian) {
  if (laplacian.rows() < 2) return 0.0;
  Eigen::VectorXd moduli = laplacian.eigenvalues().cwiseAbs();
  std::sort(moduli.begin(), moduli.end());
  return moduli(1);
}

ConnectivityReport CheckUniformConnectivity(const LaplacianSchedule& schedule,
                                            int window, long horizon,
                                            const ConnectivityOptions& opts) {
  if (window < 1) throw Error(ErrorKind::kInvalidArgument, "window T_c must be ≥ 1");
  ConnectivityReport r;
  r.window = window;
  long starts = 0;
  if (auto period = schedule.Period()) {
    r.periodic_shortcut = true;
    starts = *period;
  } else {
    if (horizon < window) {
      throw Error(ErrorKind::kInvalidArgument, "horizon must be ≥ T_c");
    }
    starts = horizon - window + 1;
  }
  r.scanned_starts = starts;
  r.lambda2.reserve(starts);
  r.min_lambda2 = std::numeric_limits<double>::infinity();
  for (long k = 0; k < starts; ++k) {
    const double l2 = Lambda2Modulus(AverageLaplacian(schedule, k, window));
    r.lambda2.push_back(l2);
    if (l2 < r.min_lambda2) {
      r.min_lambda2 = l2;
      r.argmin_k = k;
    }
  }
  r.uniformly_connected = r.min_lambda2 > opts.tol_conn;
  return r;
}

double MuBarFor(const MatrixXd& laplacian, const AssumptionLOptions& opts) {
  const MatrixXd gram = laplacian.transpose() * laplacian;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(linalg::Symmetrize(gram));
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double top = lambda(lambda.size() - 1);
  if (top <= std::numeric_limits<double>::min()) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<Eigen::Index> range, null;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    (lambda(i) > opts.range_reg * top ? range : null).push_back(i);
  }
  const MatrixXd sym = laplacian + laplacian.transpose();
  MatrixXd u_r(laplacian.rows(), static_cast<Eigen::Index>(range.size()));
  Eigen::VectorXd inv_sqrt(static_cast<Eigen::Index>(range.size()));
  for (std::size_t c = 0; c < range.size(); ++c) {
    u_r.col(c) = es.eigenvectors().col(range[c]);
    inv_sqrt(c) = 1.0 / std::sqrt(lambda(range[c]));
  }
  // On null(L) the quadratic form of L+L' vanishes, so any coupling between
  // null(L) and range(L'L) makes the inequality infeasible for every μ̄.
  if (!null.empty()) {
    MatrixXd u_n(laplacian.rows(), static_cast<Eigen::Index>(null.size()));
    for (std::size_t c = 0; c < null.size(); ++c) {
      u_n.col(c) = es.eigenvectors().col(null[c]);
    }
    const double cross = linalg::MaxAbs(u_n.transpose() * sym * u_r);
    if (cross > opts.tol_psd * std::max(1.0, std::sqrt(top))) return 0.0;
  }
  const MatrixXd pencil =
      inv_sqrt.asDiagonal() * (u_r.transpose() * sym * u_r) * inv_sqrt.asDiagonal();
  return linalg::MinEigenvalueSym(pencil);
}

AssumptionLReport CheckAssumptionL(const LaplacianSchedule& schedule,
                                   long horizon, double mu,
                                   const AssumptionLOptions& opts) {
  if (!(mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "μ must be > 0");
  AssumptionLReport r;
  r.mu = mu;

  auto visit = [&](long k, const MatrixXd& l) {
    const double bar = MuBarFor(l, opts);
    if (bar <= 0.0) {
      std::ostringstream msg;
      msg << "L(k)+L(k)' ⪰ μ̄ L(k)'L(k) has no μ̄ > 0 at k = " << k;
      throw Error(ErrorKind::kAssumptionLViolated, msg.str());
    }
    if (bar < r.mu_bar) {
      r.mu_bar = bar;
      r.argmin_k = k;
      r.unconstrained = false;
    }
    ++r.tested_steps;
  };

  if (schedule.kind() == ScheduleKind::kRandomUniform) {
    r.exhaustive = true;
    for (std::size_t i = 0; i < schedule.palette().size(); ++i) {
      visit(static_cast<long>(i), schedule.palette()[i].matrix());
    }
  } else {
    long steps = horizon;
    if (auto period = schedule.Period()) {
      steps = *period;
      r.exhaustive = true;
    }
    for (long k = 0; k < steps; ++k) visit(k, schedule.At(k));
  }
  // μ̄ carries round-off; the strict inequality must hold with margin.
  r.holds = mu < r.mu_bar * (1.0 - opts.tol_psd);
  return r;
}

ReducedLaplacian ReduceLaplacian(const MatrixXd& laplacian,
                                 const ReductionBasis& basis) {
  if (laplacian.rows() != basis.agents() || laplacian.cols() != basis.agents()) {
    throw Error(ErrorKind::kDimensionMismatch, "Laplacian and basis sizes differ");
  }
  const MatrixXd& vhat = basis.Vhat();
  return {vhat.transpose() * laplacian * vhat,
          basis.v1().transpose() * laplacian * vhat};
}

}  // namespace tvcons

#include "dtnn/dtnn_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "dtnn/errors.hpp"
#include "dtnn/kernels.hpp"
#include "dtnn/tlinalg.hpp"

namespace dtnn {
namespace {

// Independent RNG streams derived from SolverConfig::seed.
constexpr std::uint64_t kCoefficientStream = 1;
constexpr std::uint64_t kDictionaryStream = 2;

using Clock = std::chrono::steady_clock;

ThresholdedMatrix<double> slice_update_core(const Eigen::Ref<const Vector>& projection,
                                            const Eigen::Ref<const Vector>& z_prev, std::size_t n1,
                                            std::size_t n2, double beta, double rho_z) {
  const double denom = beta + rho_z;
  const Vector blended = (rho_z * z_prev + beta * projection) / denom;
  const Matrix m = Eigen::Map<const Matrix>(blended.data(), static_cast<Eigen::Index>(n1),
                                            static_cast<Eigen::Index>(n2));
  return svt_with_norm(m, 1.0 / denom);
}

AtomUpdate atom_update_core(const Vector& projection, const Vector& d_prev, double beta, double rho_d) {
  const Vector numerator = beta * projection + rho_d * d_prev;
  const double norm = numerator.norm();
  if (norm == 0.0) return AtomUpdate{d_prev, true};
  return AtomUpdate{numerator / norm, false};
}

// (beta * model + rho_x * x_prev) / (beta + rho_x) on unobserved entries,
// o on observed ones. All three operands use the tube-matrix layout.
void blend_and_project(const Eigen::Ref<const Matrix>& model, const Tensor3& x_prev, const Tensor3& o,
                       const ObservationMask& mask, double beta, double rho_x, Tensor3& out) {
  const double denom = beta + rho_x;
  out.tube_matrix() = (beta * model + rho_x * x_prev.tube_matrix()) / denom;
  auto dst = out.data();
  auto src = o.data();
  for (std::size_t p = 0; p < dst.size(); ++p) {
    if (mask.at(p)) dst[p] = src[p];
  }
}

// err = X_t - Z_t D^T, the (n1*n2) x n3 fit residual.
void refresh_residual(const Tensor3& x, const Tensor3& z, const Dictionary& dict, Matrix& err, int threads) {
  err.resize(static_cast<Eigen::Index>(x.dims().tubes()), static_cast<Eigen::Index>(x.n3()));
  kernels::apply_to_tubes(z.tube_matrix(), dict.atoms(), err, threads);
  err = x.tube_matrix() - err;
}

struct SweepStats {
  double nuclear_sum = 0.0;
  int degenerate = 0;
};

// One pass of coefficient-slice and atom updates for i = 0..d-1. `err` holds
// X_t - Z_t D^T on entry and is kept current after every atom, so the
// residual excluding atom i is err + z^i (d^i)^T without being formed.
SweepStats sweep_atoms(Tensor3& z, Dictionary& dict, Matrix& err, double beta, double rho_z, double rho_d,
                       int threads) {
  const std::size_t n1 = z.n1();
  const std::size_t n2 = z.n2();
  const auto tubes = static_cast<Eigen::Index>(z.dims().tubes());
  const auto depth = static_cast<Eigen::Index>(dict.depth());
  auto zt = z.tube_matrix();

  SweepStats stats;
  Vector projection(tubes);
  Vector atom_projection(depth);
  for (std::size_t i = 0; i < dict.atom_count(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    const Vector z_old = zt.col(col);
    const Vector d_old = dict.atom(i);

    // (R^i)^T d = err d + z_old (d^T d)
    kernels::tube_projection(err, d_old, projection, threads);
    projection += d_old.squaredNorm() * z_old;
    auto slice = slice_update_core(projection, z_old, n1, n2, beta, rho_z);
    stats.nuclear_sum += slice.nuclear_norm;
    const Eigen::Map<const Vector> z_new(slice.value.data(), tubes);

    // R^i z_new = err^T z_new + d_old (z_old^T z_new)
    kernels::slice_projection(err, z_new, atom_projection, threads);
    atom_projection += z_old.dot(z_new) * d_old;
    const AtomUpdate atom = atom_update_core(atom_projection, d_old, beta, rho_d);
    if (atom.degenerate) ++stats.degenerate;

    kernels::rank_one_update(err, z_old, d_old, 1.0, threads);
    kernels::rank_one_update(err, z_new, atom.atom, -1.0, threads);
    zt.col(col) = z_new;
    dict.set_atom(i, atom.atom);
  }
  return stats;
}

double fit_term(const Matrix& err, double beta) { return 0.5 * beta * err.squaredNorm(); }

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw NumericError(std::string(what) + ": objective became non-finite");
}

}  // namespace

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string("SolverConfig: ") + name + " must be positive");
  };
  positive(beta, "beta");
  positive(rho_z, "rho_z");
  positive(rho_d, "rho_d");
  positive(rho_x, "rho_x");
  positive(beta_boost_factor, "beta_boost_factor");
  positive(beta_growth_factor, "beta_growth_factor");
  positive(beta_cap, "beta_cap");
  if (!(stop_tol > 0.0 && stop_tol < 1.0)) throw ArgumentError("SolverConfig: stop_tol must lie in (0, 1)");
  if (atoms && *atoms < 1) throw ArgumentError("SolverConfig: atom count must be at least 1");
  if (max_iters < 1) throw ArgumentError("SolverConfig: max_iters must be at least 1");
  if (warmup_iters < 0) throw ArgumentError("SolverConfig: warmup_iters must be non-negative");
  if (residual_refresh_iters < 0) throw ArgumentError("SolverConfig: residual_refresh_iters must be non-negative");
  if (threads < 1) throw ArgumentError("SolverConfig: threads must be at least 1");
}

double scheduled_beta(int iteration, double previous, const SolverConfig& cfg) {
  double beta = previous;
  if (std::find(cfg.beta_boost_iters.begin(), cfg.beta_boost_iters.end(), iteration) != cfg.beta_boost_iters.end()) {
    beta *= cfg.beta_boost_factor;
  }
  if (iteration >= cfg.beta_growth_start) beta *= cfg.beta_growth_factor;
  return std::min(beta, cfg.beta_cap);
}

Tensor3 linear_interpolate_init(const Tensor3& o, const ObservationMask& mask) {
  require_same_dims(o.dims(), mask.dims(), "linear_interpolate_init");
  const Dims d = o.dims();

  double observed_sum = 0.0;
  std::size_t observed = 0;
  for (std::size_t p = 0; p < o.size(); ++p) {
    if (mask.at(p)) {
      observed_sum += o.data()[p];
      ++observed;
    }
  }
  if (observed == 0) throw InvalidProblemError("linear_interpolate_init: no observed entries");
  const double mean = observed_sum / static_cast<double>(observed);

  Tensor3 out = o;
  const std::size_t stride = d.tubes();
  std::vector<std::size_t> known;
  for (std::size_t t = 0; t < d.tubes(); ++t) {
    known.clear();
    for (std::size_t k = 0; k < d.n3; ++k) {
      if (mask.at(t + k * stride)) known.push_back(k);
    }
    auto value = [&](std::size_t k) -> double& { return out.data()[t + k * stride]; };
    if (known.empty()) {
      for (std::size_t k = 0; k < d.n3; ++k) value(k) = mean;
      continue;
    }
    for (std::size_t k = 0; k < known.front(); ++k) value(k) = value(known.front());
    for (std::size_t k = known.back() + 1; k < d.n3; ++k) value(k) = value(known.back());
    for (std::size_t s = 0; s + 1 < known.size(); ++s) {
      const std::size_t a = known[s];
      const std::size_t b = known[s + 1];
      const double va = value(a);
      const double vb = value(b);
      for (std::size_t k = a + 1; k < b; ++k) {
        value(k) = va + (vb - va) * static_cast<double>(k - a) / static_cast<double>(b - a);
      }
    }
  }
  return out;
}

Dictionary init_dictionary(const Tensor3& x0, const ObservationMask& mask, std::size_t d, Rng& rng) {
  require_same_dims(x0.dims(), mask.dims(), "init_dictionary");
  const Dims dims = x0.dims();
  if (d < 1 || d > dims.tubes()) {
    throw ArgumentError("init_dictionary: atom count " + std::to_string(d) + " must lie in [1, " +
                        std::to_string(dims.tubes()) + "]");
  }
  std::vector<std::size_t> counts(dims.tubes(), 0);
  for (std::size_t k = 0; k < dims.n3; ++k) {
    for (std::size_t t = 0; t < dims.tubes(); ++t) counts[t] += mask.at(t + k * dims.tubes()) ? 1 : 0;
  }
  std::vector<std::size_t> order(dims.tubes());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

  const auto tubes = x0.tube_matrix();
  Matrix atoms(static_cast<Eigen::Index>(dims.n3), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) {
    auto col = atoms.col(static_cast<Eigen::Index>(c));
    col = tubes.row(static_cast<Eigen::Index>(order[c])).transpose();
    double norm = col.norm();
    while (!(norm > 0.0)) {
      for (Eigen::Index k = 0; k < col.size(); ++k) col[k] = rng.normal();
      norm = col.norm();
    }
    col /= norm;
  }
  return Dictionary(std::move(atoms));
}

WarmStart warmup_coefficients(const Tensor3& x0, const Dictionary& d0, const SolverConfig& cfg) {
  if (d0.depth() != x0.n3()) throw ShapeError("warmup_coefficients: dictionary depth does not match tensor");
  Rng rng(cfg.seed, kCoefficientStream);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x0.n3()));
  WarmStart ws{Tensor3(Dims{x0.n1(), x0.n2(), d0.atom_count()}), d0, {}};
  for (double& v : ws.z.data()) v = scale * rng.normal();

  ws.objective.push_back(objective(ws.z, ws.dict, x0, cfg.beta));
  Matrix err;
  refresh_residual(x0, ws.z, ws.dict, err, cfg.threads);
  for (int pass = 0; pass < cfg.warmup_iters; ++pass) {
    const SweepStats stats = sweep_atoms(ws.z, ws.dict, err, cfg.beta, cfg.rho_z, cfg.rho_d, cfg.threads);
    const double value = stats.nuclear_sum + fit_term(err, cfg.beta);
    require_finite(value, "warmup_coefficients");
    ws.objective.push_back(value);
  }
  return ws;
}

Matrix residual(std::size_t i, const Tensor3& x, const Dictionary& dict, const Tensor3& z) {
  if (i >= dict.atom_count() || z.n3() != dict.atom_count() || dict.depth() != x.n3() ||
      z.n1() != x.n1() || z.n2() != x.n2()) {
    throw ShapeError("residual: inconsistent operands");
  }
  Matrix r = unfold3(x);
  const auto zt = z.tube_matrix();
  for (std::size_t j = 0; j < dict.atom_count(); ++j) {
    if (j == i) continue;
    r.noalias() -= dict.atom(j) * zt.col(static_cast<Eigen::Index>(j)).transpose();
  }
  return r;
}

Matrix update_slice_z(const Matrix& r, const Vector& atom, const Matrix& z_prev, double beta, double rho_z) {
  if (r.rows() != atom.size() || r.cols() != z_prev.size()) throw ShapeError("update_slice_z: operand shapes differ");
  if (!(beta + rho_z > 0.0)) throw ArgumentError("update_slice_z: beta + rho_z must be positive");
  const Vector projection = r.transpose() * atom;
  const Eigen::Map<const Vector> z_prev_vec(z_prev.data(), z_prev.size());
  return slice_update_core(projection, z_prev_vec, static_cast<std::size_t>(z_prev.rows()),
                           static_cast<std::size_t>(z_prev.cols()), beta, rho_z)
      .value;
}

AtomUpdate update_atom_d(const Matrix& r, const Matrix& z_new, const Vector& d_prev, double beta, double rho_d) {
  if (r.rows() != d_prev.size() || r.cols() != z_new.size()) throw ShapeError("update_atom_d: operand shapes differ");
  const Eigen::Map<const Vector> z_vec(z_new.data(), z_new.size());
  const Vector projection = r * z_vec;
  return atom_update_core(projection, d_prev, beta, rho_d);
}

Tensor3 update_x(const Tensor3& z, const Dictionary& dict, const Tensor3& x_prev, const Tensor3& o,
                 const ObservationMask& mask, double beta, double rho_x) {
  require_same_dims(x_prev.dims(), o.dims(), "update_x");
  require_same_dims(x_prev.dims(), mask.dims(), "update_x");
  const Tensor3 model = mode3_product(z, dict.atoms());
  require_same_dims(model.dims(), x_prev.dims(), "update_x");
  Tensor3 out(x_prev.dims());
  blend_and_project(model.tube_matrix(), x_prev, o, mask, beta, rho_x, out);
  return out;
}

double objective(const Tensor3& z, const Dictionary& dict, const Tensor3& x, double beta) {
  const Tensor3 model = mode3_product(z, dict.atoms());
  require_same_dims(model.dims(), x.dims(), "objective");
  const double fit = 0.5 * beta * (x.tube_matrix() - model.tube_matrix()).squaredNorm();
  double nuclear = 0.0;
  for (std::size_t i = 0; i < z.n3(); ++i) nuclear += nuclear_norm(Matrix(z.slice(i)));
  return fit + nuclear;
}

CompletionResult solve(const Tensor3& o, const ObservationMask& mask, const SolverConfig& cfg,
                       const IterationObserver& observer) {
  cfg.validate();
  require_same_dims(o.dims(), mask.dims(), "solve");
  if (mask.count_observed() == 0) throw InvalidProblemError("solve: the mask has no observed entries");
  if (!o.all_finite()) throw NumericError("solve: observation contains non-finite entries");

  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  // Work on a copy whose unobserved entries are zero so the input values
  // there cannot leak into the result.
  const Tensor3 obs = project_observed(Tensor3(o.dims()), o, mask);
  const std::size_t d = cfg.resolved_atoms(o.n3());

  Tensor3 x = linear_interpolate_init(obs, mask);
  Rng dict_rng(cfg.seed, kDictionaryStream);
  WarmStart warm = warmup_coefficients(x, init_dictionary(x, mask, d, dict_rng), cfg);
  Tensor3 z = std::move(warm.z);
  Dictionary dict = std::move(warm.dict);

  CompletionResult result;
  result.method = "dtnn";
  double beta = cfg.beta;

  IterationRecord initial;
  initial.objective = objective(z, dict, x, beta);
  initial.beta = beta;
  initial.wall_time_s = elapsed();
  require_finite(initial.objective, "solve");
  result.trace.push_back(initial);
  if (observer) observer(IterationSnapshot{result.trace.back(), x, z, dict});

  Matrix err;
  refresh_residual(x, z, dict, err, cfg.threads);
  Tensor3 z_prev;
  Matrix d_prev;
  Tensor3 x_prev;
  Tensor3 x_next(x.dims());
  for (int k = 1; k <= cfg.max_iters; ++k) {
    beta = scheduled_beta(k, beta, cfg);
    if (cfg.residual_refresh_iters > 0 && k % cfg.residual_refresh_iters == 0) {
      refresh_residual(x, z, dict, err, cfg.threads);
    }
    z_prev = z;
    d_prev = dict.atoms();
    x_prev = x;

    const SweepStats stats = sweep_atoms(z, dict, err, beta, cfg.rho_z, cfg.rho_d, cfg.threads);

    // Z x_3 D equals X - err; the residual follows X by the same increment.
    blend_and_project(x.tube_matrix() - err, x, obs, mask, beta, cfg.rho_x, x_next);
    err += x_next.tube_matrix() - x.tube_matrix();
    std::swap(x, x_next);

    IterationRecord rec;
    rec.iteration = k;
    rec.beta = beta;
    rec.objective = stats.nuclear_sum + fit_term(err, beta);
    rec.degenerate_atoms = stats.degenerate;
    rec.rel_change_z = relative_change(z.tube_matrix(), z_prev.tube_matrix());
    rec.rel_change_d = relative_change(dict.atoms(), d_prev);
    rec.rel_change_x = relative_change(x.tube_matrix(), x_prev.tube_matrix());
    rec.wall_time_s = elapsed();
    require_finite(rec.objective, "solve");
    result.trace.push_back(rec);
    if (observer) observer(IterationSnapshot{result.trace.back(), x, z, dict});

    if (std::max({rec.rel_change_z, rec.rel_change_d, rec.rel_change_x}) < cfg.stop_tol) {
      result.converged = true;
      break;
    }
  }

  result.x = std::move(x);
  result.z = std::move(z);
  result.dict = std::move(dict);
  result.wall_time_s = elapsed();
  return result;
}

}  // namespace dtnn

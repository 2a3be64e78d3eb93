#include "dtnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dtnn/errors.hpp"

namespace dtnn {
namespace {

constexpr std::size_t kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;
constexpr std::size_t kUiqiWindow = 8;

void require_metric_dims(const Tensor3& gt, const Tensor3& rec, const char* what) {
  require_same_dims(gt.dims(), rec.dims(), what);
}

// Weighted first and second moments of one window. Variances are forced to
// exactly zero on constant windows so degenerate-case branches are reliable.
struct WindowStats {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double cov = 0.0;
};

WindowStats window_stats(const Tensor3::ConstMatrixMap& x, const Tensor3::ConstMatrixMap& y, const Matrix& w,
                         Eigen::Index r0, Eigen::Index c0) {
  const auto h = w.rows();
  const auto wd = w.cols();
  const auto bx = x.block(r0, c0, h, wd);
  const auto by = y.block(r0, c0, h, wd);
  WindowStats s;
  s.mean_x = (w.array() * bx.array()).sum();
  s.mean_y = (w.array() * by.array()).sum();
  const bool const_x = bx.maxCoeff() == bx.minCoeff();
  const bool const_y = by.maxCoeff() == by.minCoeff();
  const auto dx = bx.array() - s.mean_x;
  const auto dy = by.array() - s.mean_y;
  s.var_x = const_x ? 0.0 : (w.array() * dx * dx).sum();
  s.var_y = const_y ? 0.0 : (w.array() * dy * dy).sum();
  s.cov = (const_x || const_y) ? 0.0 : (w.array() * dx * dy).sum();
  return s;
}

Matrix gaussian_window(std::size_t rows, std::size_t cols) {
  Matrix w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const double cr = (static_cast<double>(rows) - 1.0) / 2.0;
  const double cc = (static_cast<double>(cols) - 1.0) / 2.0;
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      const double dr = static_cast<double>(r) - cr;
      const double dc = static_cast<double>(c) - cc;
      w(r, c) = std::exp(-(dr * dr + dc * dc) / (2.0 * kSsimSigma * kSsimSigma));
    }
  }
  return w / w.sum();
}

Matrix uniform_window(std::size_t rows, std::size_t cols) {
  return Matrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols),
                          1.0 / static_cast<double>(rows * cols));
}

template <typename WindowScore>
double windowed_mean(const Tensor3& gt, const Tensor3& rec, const Matrix& w, WindowScore score) {
  const auto rows = static_cast<Eigen::Index>(gt.n1()) - w.rows() + 1;
  const auto cols = static_cast<Eigen::Index>(gt.n2()) - w.cols() + 1;
  double total = 0.0;
  for (std::size_t k = 0; k < gt.n3(); ++k) {
    const auto x = gt.slice(k);
    const auto y = rec.slice(k);
    double slice_sum = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) slice_sum += score(window_stats(x, y, w, r, c));
    }
    total += slice_sum / static_cast<double>(rows * cols);
  }
  return total / static_cast<double>(gt.n3());
}

double cosine(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  const double aa = a.squaredNorm();
  const double bb = b.squaredNorm();
  // sqrt(aa * bb) == aa exactly when a == b, so identical vectors give 1.
  return a.dot(b) / std::sqrt(aa * bb);
}

}  // namespace

std::vector<double> psnr_per_slice(const Tensor3& gt, const Tensor3& rec, double peak) {
  require_metric_dims(gt, rec, "psnr");
  if (!(peak > 0.0)) throw ArgumentError("psnr: peak must be positive");
  std::vector<double> out(gt.n3());
  const double count = static_cast<double>(gt.dims().tubes());
  for (std::size_t k = 0; k < gt.n3(); ++k) {
    const double mse = (gt.slice(k) - rec.slice(k)).squaredNorm() / count;
    out[k] = mse == 0.0 ? kPsnrCap : std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
  }
  return out;
}

double psnr(const Tensor3& gt, const Tensor3& rec, double peak) {
  const auto per_slice = psnr_per_slice(gt, rec, peak);
  if (per_slice.empty()) return kPsnrCap;
  return std::accumulate(per_slice.begin(), per_slice.end(), 0.0) / static_cast<double>(per_slice.size());
}

double ssim_mean(const Tensor3& gt, const Tensor3& rec) {
  require_metric_dims(gt, rec, "ssim_mean");
  const Matrix w = gaussian_window(std::min(kSsimWindow, gt.n1()), std::min(kSsimWindow, gt.n2()));
  return windowed_mean(gt, rec, w, [](const WindowStats& s) {
    const double num = (2.0 * s.mean_x * s.mean_y + kSsimC1) * (2.0 * s.cov + kSsimC2);
    const double den = (s.mean_x * s.mean_x + s.mean_y * s.mean_y + kSsimC1) * (s.var_x + s.var_y + kSsimC2);
    return num / den;
  });
}

double uiqi_mean(const Tensor3& gt, const Tensor3& rec) {
  require_metric_dims(gt, rec, "uiqi_mean");
  const Matrix w = uniform_window(std::min(kUiqiWindow, gt.n1()), std::min(kUiqiWindow, gt.n2()));
  return windowed_mean(gt, rec, w, [](const WindowStats& s) {
    const double contrast = s.var_x + s.var_y;
    const double luminance = s.mean_x * s.mean_x + s.mean_y * s.mean_y;
    if (contrast == 0.0 && luminance == 0.0) return 1.0;
    if (contrast == 0.0) return 2.0 * s.mean_x * s.mean_y / luminance;
    if (luminance == 0.0) return 2.0 * s.cov / contrast;
    return 4.0 * s.cov * s.mean_x * s.mean_y / (contrast * luminance);
  });
}

SamResult sam(const Tensor3& gt, const Tensor3& rec) {
  require_metric_dims(gt, rec, "sam");
  const auto g = gt.tube_matrix();
  const auto r = rec.tube_matrix();
  SamResult out;
  double total = 0.0;
  std::size_t used = 0;
  for (Eigen::Index q = 0; q < g.rows(); ++q) {
    const Vector a = g.row(q).transpose();
    const Vector b = r.row(q).transpose();
    if (a.squaredNorm() == 0.0 || b.squaredNorm() == 0.0) {
      ++out.skipped;
      continue;
    }
    total += std::acos(std::clamp(cosine(a, b), -1.0, 1.0));
    ++used;
  }
  out.mean = used == 0 ? 0.0 : total / static_cast<double>(used);
  return out;
}

double sam_mean(const Tensor3& gt, const Tensor3& rec) { return sam(gt, rec).mean; }

double rmse(const Tensor3& gt, const Tensor3& rec) {
  require_metric_dims(gt, rec, "rmse");
  if (gt.size() == 0) return 0.0;
  return std::sqrt((gt.tube_matrix() - rec.tube_matrix()).squaredNorm() / static_cast<double>(gt.size()));
}

MapeResult mape_detail(const Tensor3& gt, const Tensor3& rec) {
  require_metric_dims(gt, rec, "mape");
  MapeResult out;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t p = 0; p < gt.size(); ++p) {
    const double g = gt.data()[p];
    if (g == 0.0) {
      ++out.excluded;
      continue;
    }
    total += std::abs(rec.data()[p] - g) / std::abs(g);
    ++used;
  }
  if (used == 0) throw UndefinedMetricError("mape: every ground-truth entry is zero");
  out.value = total / static_cast<double>(used);
  return out;
}

double mape(const Tensor3& gt, const Tensor3& rec) { return mape_detail(gt, rec).value; }

double dict_err(const Matrix& est, const Matrix& gt) {
  if (est.rows() != gt.rows() || est.cols() != gt.cols()) throw ShapeError("dict_err: dictionary shapes differ");
  if (est.cols() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < est.cols(); ++i) {
    double best = -1.0;
    for (Eigen::Index j = 0; j < gt.cols(); ++j) {
      const double c = std::abs(cosine(est.col(i), gt.col(j)));
      if (c > best) best = c;
    }
    total += 1.0 - std::min(best, 1.0);
  }
  return total / static_cast<double>(est.cols());
}

double dict_err(const Dictionary& est, const Dictionary& gt) { return dict_err(est.atoms(), gt.atoms()); }

MetricsReport evaluate(const Tensor3& gt, const Tensor3& rec, double peak, const Dictionary* dict_est,
                       const Dictionary* dict_gt) {
  MetricsReport r;
  r.psnr_per_slice = psnr_per_slice(gt, rec, peak);
  r.psnr_mean = r.psnr_per_slice.empty()
                    ? kPsnrCap
                    : std::accumulate(r.psnr_per_slice.begin(), r.psnr_per_slice.end(), 0.0) /
                          static_cast<double>(r.psnr_per_slice.size());
  r.ssim_mean = ssim_mean(gt, rec);
  r.uiqi_mean = uiqi_mean(gt, rec);
  r.sam_mean = sam_mean(gt, rec);
  r.rmse = rmse(gt, rec);
  try {
    r.mape = mape(gt, rec);
  } catch (const UndefinedMetricError&) {
    r.mape.reset();
  }
  if (dict_est && dict_gt) r.dict_err = dict_err(*dict_est, *dict_gt);
  return r;
}

}  // namespace dtnn

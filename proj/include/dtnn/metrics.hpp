#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dtnn/dictionary.hpp"
#include "dtnn/tensor3.hpp"

namespace dtnn {

/// PSNR reported for slices that match exactly (and the upper clamp otherwise).
inline constexpr double kPsnrCap = 100.0;

struct MetricsReport {
  std::vector<double> psnr_per_slice;  // dB
  double psnr_mean = 0.0;              // dB
  double ssim_mean = 0.0;
  double uiqi_mean = 0.0;
  double sam_mean = 0.0;               // radians
  double rmse = 0.0;
  std::optional<double> mape;          // fraction; empty when ground truth is all zero
  std::optional<double> dict_err;
};

std::vector<double> psnr_per_slice(const Tensor3& gt, const Tensor3& rec, double peak = 1.0);
/// Mean over frontal slices of 10 log10(peak^2 / MSE), capped at kPsnrCap.
double psnr(const Tensor3& gt, const Tensor3& rec, double peak = 1.0);

/// Windowed SSIM (11x11 Gaussian, sigma 1.5, K1 = 0.01, K2 = 0.03, range 1)
/// over valid window positions, averaged over windows and then slices.
/// Slices smaller than the window use a window clipped to the slice size.
double ssim_mean(const Tensor3& gt, const Tensor3& rec);

/// Universal quality index over sliding 8x8 windows, averaged over windows and
/// then slices. Same clipping rule as ssim_mean.
double uiqi_mean(const Tensor3& gt, const Tensor3& rec);

struct SamResult {
  double mean = 0.0;          // radians
  std::size_t skipped = 0;    // positions where either tube is zero
};
/// Mean spectral angle between corresponding tubes.
SamResult sam(const Tensor3& gt, const Tensor3& rec);
double sam_mean(const Tensor3& gt, const Tensor3& rec);

double rmse(const Tensor3& gt, const Tensor3& rec);

struct MapeResult {
  double value = 0.0;         // fraction, not percent
  std::size_t excluded = 0;   // entries with zero ground truth
};
/// Mean of |rec - gt| / |gt| over entries with gt != 0. Throws
/// UndefinedMetricError if every ground-truth entry is zero.
MapeResult mape_detail(const Tensor3& gt, const Tensor3& rec);
double mape(const Tensor3& gt, const Tensor3& rec);

/// (1/d) sum_i (1 - |cos(est_i, gt_j*)|), j* = argmax_j |cos(est_i, gt_j)|,
/// ties to the smallest j.
double dict_err(const Matrix& est, const Matrix& gt);
double dict_err(const Dictionary& est, const Dictionary& gt);

/// All tensor metrics at once; dict_err when both dictionaries are given.
MetricsReport evaluate(const Tensor3& gt, const Tensor3& rec, double peak = 1.0,
                       const Dictionary* dict_est = nullptr, const Dictionary* dict_gt = nullptr);

}  // namespace dtnn

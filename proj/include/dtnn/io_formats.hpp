#pragma once

// On-disk formats. All integers and floats are little-endian.
//
// TNS3 tensor file
//   0   4  magic "TNS3"
//   4   4  u32 version = 1
//   8  24  u64 n1, n2, n3
//   32 8N  f64 payload, offset i + j*n1 + k*n1*n2, N = n1*n2*n3
//
// MSK3 mask file: same header with magic "MSK3", then N bytes each 0 or 1.
//
// Dictionaries (n3 x d) and coefficient tensors are stored as TNS3; a
// dictionary uses dims (n3, d, 1), i.e. its column-major matrix.
//
// Concurrent writers to one path are not supported.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtnn/completion.hpp"
#include "dtnn/dictionary.hpp"
#include "dtnn/metrics.hpp"
#include "dtnn/tensor3.hpp"

namespace dtnn {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 32;

std::vector<std::uint8_t> encode_tensor(const Tensor3& t);
std::vector<std::uint8_t> encode_mask(const ObservationMask& m);
/// Throw FormatError with the offending byte offset on any malformed input.
Tensor3 decode_tensor(std::span<const std::uint8_t> bytes);
ObservationMask decode_mask(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const Tensor3& t);
Tensor3 read_tensor(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const ObservationMask& m);
ObservationMask read_mask(const std::filesystem::path& path);
void write_dictionary(const std::filesystem::path& path, const Dictionary& d);
/// Throws FormatError if the file is not n3 x d x 1 or its columns are not unit norm.
Dictionary read_dictionary(const std::filesystem::path& path);

/// Inputs of a JSON report; any part may be absent.
struct ReportContent {
  std::optional<MetricsReport> metrics;
  std::vector<IterationRecord> trace;
  double wall_time_s = 0.0;
  /// Pre-serialized JSON object, emitted under "config" when set.
  std::optional<std::string> config_json;
};

/// JSON object with exactly the keys psnr_mean, ssim_mean, uiqi_mean,
/// sam_mean, rmse, mape, dict_err, iterations, objective_trace, beta_trace,
/// wall_time_s (plus "config" when supplied). Absent or non-finite numbers
/// are null; floats carry 17 significant digits.
std::string write_report(const ReportContent& content);
void write_report_file(const std::filesystem::path& path, const ReportContent& content);

}  // namespace dtnn

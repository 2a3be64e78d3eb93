#include "dtnn/io_formats.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "dtnn/errors.hpp"

namespace dtnn {
namespace {

constexpr char kTensorMagic[4] = {'T', 'N', 'S', '3'};
constexpr char kMaskMagic[4] = {'M', 'S', 'K', '3'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v |= static_cast<std::uint64_t>(bytes[at + static_cast<std::size_t>(b)]) << (8 * b);
  return v;
}

void write_header(std::vector<std::uint8_t>& out, const char (&magic)[4], const Dims& d) {
  out.insert(out.end(), magic, magic + 4);
  put_u32(out, kFormatVersion);
  put_u64(out, d.n1);
  put_u64(out, d.n2);
  put_u64(out, d.n3);
}

// Validates magic, version and payload length; returns the dims.
Dims read_header(std::span<const std::uint8_t> bytes, const char (&magic)[4], std::uint64_t element_bytes,
                 const char* kind) {
  const std::string what(kind);
  for (std::size_t b = 0; b < 4; ++b) {
    if (b >= bytes.size()) throw FormatError(what + ": truncated magic", bytes.size());
    if (bytes[b] != static_cast<std::uint8_t>(magic[b])) throw FormatError(what + ": bad magic", b);
  }
  if (bytes.size() < 8) throw FormatError(what + ": truncated version", bytes.size());
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kFormatVersion) throw FormatError(what + ": unsupported version " + std::to_string(version), 4);
  if (bytes.size() < kHeaderBytes) throw FormatError(what + ": truncated dimensions", bytes.size());

  const std::uint64_t n1 = get_le(bytes, 8, 8);
  const std::uint64_t n2 = get_le(bytes, 16, 8);
  const std::uint64_t n3 = get_le(bytes, 24, 8);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / element_bytes;
  std::uint64_t count = 1;
  for (std::uint64_t n : {n1, n2, n3}) {
    if (n != 0 && count > limit / n) throw FormatError(what + ": dimensions overflow", 8);
    count *= n;
  }
  const std::uint64_t expected = kHeaderBytes + count * element_bytes;
  if (bytes.size() < expected) throw FormatError(what + ": truncated payload", bytes.size());
  if (bytes.size() > expected) throw FormatError(what + ": trailing bytes after payload", expected);
  return Dims{n1, n2, n3};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void append_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_optional(std::string& out, const std::optional<double>& v) {
  if (v) {
    append_number(out, *v);
  } else {
    out += "null";
  }
}

template <typename Field>
void append_array(std::string& out, const std::vector<IterationRecord>& trace, Field field) {
  out += '[';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) out += ", ";
    append_number(out, field(trace[i]));
  }
  out += ']';
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor3& t) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 8 * t.size());
  write_header(out, kTensorMagic, t.dims());
  for (double v : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

std::vector<std::uint8_t> encode_mask(const ObservationMask& m) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + m.size());
  write_header(out, kMaskMagic, m.dims());
  for (unsigned char f : m.flags()) out.push_back(f ? 1 : 0);
  return out;
}

Tensor3 decode_tensor(std::span<const std::uint8_t> bytes) {
  const Dims d = read_header(bytes, kTensorMagic, 8, "TNS3");
  std::vector<double> values(d.size());
  for (std::size_t p = 0; p < values.size(); ++p) {
    values[p] = std::bit_cast<double>(get_le(bytes, kHeaderBytes + 8 * p, 8));
  }
  return Tensor3(d, std::move(values));
}

ObservationMask decode_mask(std::span<const std::uint8_t> bytes) {
  const Dims d = read_header(bytes, kMaskMagic, 1, "MSK3");
  std::vector<unsigned char> flags(d.size());
  for (std::size_t p = 0; p < flags.size(); ++p) {
    const std::uint8_t b = bytes[kHeaderBytes + p];
    if (b > 1) throw FormatError("MSK3: flag byte " + std::to_string(b) + " is not 0 or 1", kHeaderBytes + p);
    flags[p] = b;
  }
  return ObservationMask(d, std::move(flags));
}

void write_tensor(const std::filesystem::path& path, const Tensor3& t) {
  const auto bytes = encode_tensor(t);
  write_file(path, bytes.data(), bytes.size());
}

Tensor3 read_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

void write_mask(const std::filesystem::path& path, const ObservationMask& m) {
  const auto bytes = encode_mask(m);
  write_file(path, bytes.data(), bytes.size());
}

ObservationMask read_mask(const std::filesystem::path& path) { return decode_mask(read_file(path)); }

void write_dictionary(const std::filesystem::path& path, const Dictionary& d) {
  const Matrix& a = d.atoms();
  write_tensor(path, Tensor3(Dims{d.depth(), d.atom_count(), 1}, std::vector<double>(a.data(), a.data() + a.size())));
}

Dictionary read_dictionary(const std::filesystem::path& path) {
  const Tensor3 t = read_tensor(path);
  if (t.n3() != 1) throw FormatError("dictionary file must have n3 = 1", 24);
  try {
    return Dictionary(Matrix(t.slice(0)));
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("dictionary file: ") + e.what(), kHeaderBytes);
  }
}

std::string write_report(const ReportContent& content) {
  const auto& m = content.metrics;
  auto metric = [&](auto member) -> std::optional<double> {
    if (!m) return std::nullopt;
    return (*m).*member;
  };
  std::string out = "{\n";
  auto key = [&](const char* name) {
    out += "  \"";
    out += name;
    out += "\": ";
  };
  key("psnr_mean");
  append_optional(out, metric(&MetricsReport::psnr_mean));
  out += ",\n";
  key("ssim_mean");
  append_optional(out, metric(&MetricsReport::ssim_mean));
  out += ",\n";
  key("uiqi_mean");
  append_optional(out, metric(&MetricsReport::uiqi_mean));
  out += ",\n";
  key("sam_mean");
  append_optional(out, metric(&MetricsReport::sam_mean));
  out += ",\n";
  key("rmse");
  append_optional(out, metric(&MetricsReport::rmse));
  out += ",\n";
  key("mape");
  append_optional(out, m ? m->mape : std::nullopt);
  out += ",\n";
  key("dict_err");
  append_optional(out, m ? m->dict_err : std::nullopt);
  out += ",\n";
  key("iterations");
  out += std::to_string(content.trace.empty() ? 0 : content.trace.back().iteration);
  out += ",\n";
  key("objective_trace");
  append_array(out, content.trace, [](const IterationRecord& r) { return r.objective; });
  out += ",\n";
  key("beta_trace");
  append_array(out, content.trace, [](const IterationRecord& r) { return r.beta; });
  out += ",\n";
  key("wall_time_s");
  append_number(out, content.wall_time_s);
  if (content.config_json) {
    out += ",\n";
    key("config");
    out += *content.config_json;
  }
  out += "\n}\n";
  return out;
}

void write_report_file(const std::filesystem::path& path, const ReportContent& content) {
  const std::string text = write_report(content);
  write_file(path, text.data(), text.size());
}

}  // namespace dtnn

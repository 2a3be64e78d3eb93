#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtnn/datagen.hpp"
#include "dtnn/dtnn_solver.hpp"

namespace dtnn::fixture {

/// A recorded DTNN run: synth_low_rank_coded data, random_mask and solver all
/// seeded with `seed`, solver atoms = data atoms, other settings default.
struct ReferenceRun {
  SynthSpec spec;
  double sampling_rate = 0.0;
  double missing_rel_error = 0.0;
};

inline ReferenceRun reference_run(const std::string& name) {
  std::ifstream in(DTNN_FIXTURE_DIR "/reference_runs.json");
  if (!in) throw std::runtime_error("cannot open reference_runs.json");
  const nlohmann::json all = nlohmann::json::parse(in);
  const nlohmann::json& j = all.at(name);
  ReferenceRun r;
  r.spec.dims = Dims{j.at("dims")[0].get<std::size_t>(), j.at("dims")[1].get<std::size_t>(),
                     j.at("dims")[2].get<std::size_t>()};
  r.spec.atoms = j.at("atoms").get<std::size_t>();
  r.spec.slice_rank = j.at("slice_rank").get<std::size_t>();
  r.spec.seed = j.at("seed").get<std::uint64_t>();
  r.sampling_rate = j.at("sampling_rate").get<double>();
  r.missing_rel_error = j.at("missing_rel_error").get<double>();
  return r;
}

/// ||(x - gt) off Omega|| / ||gt off Omega||
inline double missing_relative_error(const Tensor3& x, const Tensor3& gt, const ObservationMask& mask) {
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (mask.at(p)) continue;
    const double e = x.data()[p] - gt.data()[p];
    num += e * e;
    den += gt.data()[p] * gt.data()[p];
  }
  return std::sqrt(num / den);
}

/// Missing-entry RMSE.
inline double missing_rmse(const Tensor3& x, const Tensor3& gt, const ObservationMask& mask) {
  double num = 0.0;
  std::size_t n = 0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (mask.at(p)) continue;
    const double e = x.data()[p] - gt.data()[p];
    num += e * e;
    ++n;
  }
  return std::sqrt(num / static_cast<double>(n));
}

}  // namespace dtnn::fixture

namespace dtnn::fixture {

/// Bytes of a hex fixture file; '#' starts a comment line.
inline std::vector<std::uint8_t> hex_fixture(const std::string& name) {
  std::ifstream in(std::string(DTNN_FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("cannot open " + name);
  std::vector<std::uint8_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back(static_cast<std::uint8_t>(std::stoul(w, nullptr, 16)));
  }
  return out;
}

}  // namespace dtnn::fixture

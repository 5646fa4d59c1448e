#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace talab {

/// An empirically calibrated constant, frozen together with the seed of
/// the corpus that produced it. recalibrate() reruns the sweep; the
/// frozen value is the sup of the observed ratios over that corpus.
struct CalibratedConstant {
  std::string id;
  double value;
  std::uint64_t corpus_seed;
  std::string description;
};

const std::vector<CalibratedConstant>& calibrated_constants();
const CalibratedConstant& calibrated(const std::string& id);

// Recomputes the constant from its corpus; identical seeds reproduce the
// frozen value.
double recalibrate(const std::string& id, std::uint64_t corpus_seed);

}  // namespace talab

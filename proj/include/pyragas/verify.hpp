#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pyragas::verify {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Property {
  std::string name;
  std::function<PropertyResult(std::uint64_t seed)> run;
};

/// Every invariant of the library, each runnable from a seed.
const std::vector<Property>& properties();

/// Runs the suite (optionally restricted to names containing `filter`).
std::vector<PropertyResult> run_all(std::uint64_t seed, unsigned jobs = 0,
                                    const std::string& filter = "");

/// PYRAGAS_LAB_SEED if set and parseable, otherwise kDefaultSeed.
std::uint64_t seed_from_environment();

}  // namespace pyragas::verify

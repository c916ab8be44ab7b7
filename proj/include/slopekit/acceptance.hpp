#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slopekit::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // what was compared and, on failure, the first mismatch
};

constexpr int kCriteria = 10;

/// Runs one criterion (1..10). Exceptions are caught and reported as failures.
CriterionResult run_criterion(int id, std::uint64_t seed = 1);
std::vector<CriterionResult> run_all(std::uint64_t seed = 1);

}  // namespace slopekit::acceptance

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slopekit {

/// One CLI/C-API job. Unset optionals take per-command defaults in validate().
struct JobConfig {
  std::string command;
  std::optional<int> p;
  std::optional<int> k;
  std::optional<int> depth;  // I
  std::optional<int> qprec;  // Q
  std::optional<int> m;
  std::optional<int> n;      // control-check: number of Hasse twists
  std::optional<int> ell;    // tp-matrix: Hecke index, default p
  std::optional<int> component;
  std::optional<int> center;
  std::optional<int> poly_degree;
  std::vector<int> weights;
  std::vector<int> hecke_primes;
  std::vector<std::string> bounds;  // disc: slope bounds h as "a/b"
  std::uint64_t seed = 1;
};

const std::vector<std::string>& job_commands();

/// Fills defaults and checks every precondition before anything runs.
/// Throws InvalidArgument naming the violated precondition and the minimum
/// that would satisfy it.
void validate(JobConfig& config);

struct JobResult {
  std::string json;  // deterministic, two-space indented
  bool passed = true;  // false on a failed verification
};

/// Validates a copy of the config, then runs it.
JobResult run_job(const JobConfig& config);

/// Parses a JSON object with the JobConfig field names ("I" and "Q" for depth
/// and qprec). Unknown keys are rejected.
JobConfig job_from_json(const std::string& text);

}  // namespace slopekit

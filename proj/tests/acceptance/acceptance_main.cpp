// One line per acceptance criterion; exit status 1 if any fails.
// Usage: acceptance [--seed N] [id ...]

#include <chrono>
#include <cstdio>
#include <future>
#include <string>
#include <vector>

#include "slopekit/acceptance.hpp"

using namespace slopekit::acceptance;

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else {
      ids.push_back(std::stoi(a));
    }
  }
  if (ids.empty())
    for (int id = 1; id <= kCriteria; ++id) ids.push_back(id);

  // Criteria are independent, so they run concurrently; output stays in id order.
  struct Timed {
    CriterionResult result;
    double seconds;
  };
  std::vector<std::future<Timed>> jobs;
  for (int id : ids)
    jobs.push_back(std::async(std::launch::async, [id, seed] {
      const auto start = std::chrono::steady_clock::now();
      auto r = run_criterion(id, seed);
      return Timed{std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
    }));

  int failed = 0;
  for (auto& j : jobs) {
    const auto t = j.get();
    std::printf("[%s] %2d %-22s %7.1fs  %s\n", t.result.passed ? "PASS" : "FAIL", t.result.id, t.result.name.c_str(),
                t.seconds, t.result.detail.c_str());
    failed += t.result.passed ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed (seed %llu)\n", static_cast<int>(ids.size()) - failed, ids.size(),
              static_cast<unsigned long long>(seed));
  return failed == 0 ? 0 : 1;
}

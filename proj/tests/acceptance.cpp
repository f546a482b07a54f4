// Acceptance gate: runs every verification check at its pinned trial count and
// wall-clock budget, printing one line per criterion.  Exit status is the
// number of failed criteria, so a zero exit means the whole battery passed.

#include <cstdio>
#include <exception>
#include <string>

#include "ovemd/verify.hpp"

namespace {

struct Criterion {
  int id;
  const char* check;
  int trials;
  long long cap_ms;
};

// Trial counts and budgets are pinned here; changing them changes what
// "accepted" means and should be as visible as a code change.
const Criterion kCriteria[] = {
    {1, "exact-reduction-identity", 100, 60'000},
    {2, "sqemd-lowrank", 100, 60'000},
    {3, "square-decomposition", 1'000'000, 60'000},
    {4, "embedding-identities", 1'000, 30'000},
    {5, "mom-exact-emd", 200, 120'000},
    {6, "findov-sampling", 100, 300'000},
    {7, "phased-hitting-set", 500, 120'000},
    {8, "promise-findov-routes", 400, 300'000},
    {9, "pipeline", 100, 600'000},
    {10, "solver-oracle-equivalence", 200, 60'000},
};

constexpr std::uint64_t kSeed = 20240817;

}  // namespace

int main() {
  int failed = 0;
  std::printf("acceptance battery, seed %llu\n", static_cast<unsigned long long>(kSeed));
  for (const Criterion& c : kCriteria) {
    std::string status;
    std::string detail;
    try {
      ovemd::VerificationReport rep = ovemd::run_check(c.check, c.trials, kSeed);
      bool ok = rep.failures == 0 && rep.runtime_ms <= c.cap_ms;
      status = ok ? "PASS" : "FAIL";
      if (!ok) ++failed;
      char buf[256];
      std::snprintf(buf, sizeof buf, "instances=%d failures=%d max_dev=%.3Lg time=%lldms cap=%lldms",
                    rep.instances, rep.failures, rep.max_deviation, rep.runtime_ms, c.cap_ms);
      detail = buf;
      if (!rep.note.empty()) detail += " note=\"" + rep.note + "\"";
      if (rep.failures > 0 && !rep.failing_seeds.empty()) {
        detail += " failing_seeds=";
        for (std::size_t i = 0; i < rep.failing_seeds.size(); ++i) {
          if (i) detail += ",";
          detail += std::to_string(rep.failing_seeds[i]);
        }
      }
      if (rep.runtime_ms > c.cap_ms) detail += " over-budget";
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("exception: ") + e.what();
      ++failed;
    }
    std::printf("criterion %2d  %-26s %s  %s\n", c.id, c.check, status.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/10 criteria passed\n", 10 - failed);
  return failed;
}

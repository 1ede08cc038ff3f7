// Acceptance gate: runs the numbered acceptance criteria and prints one
// pass/fail line per criterion.  With no arguments all ten run; otherwise the
// arguments select criteria by number.  Exits nonzero if any selected
// criterion fails.  Expensive shared runs are cached on disk (directory
// "acceptance_cache" in the working directory, or $TAILWAVE_CACHE).

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "tailwave/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const int v = std::atoi(argv[i]);
    if (v < 1 || v > 10) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1..10]\n", argv[0]);
      return 64;
    }
    ids.push_back(v);
  }
  if (ids.empty())
    for (int i = 1; i <= 10; ++i) ids.push_back(i);

  tailwave::ArtifactCache cache;
  bool all_pass = true;
  for (int id : ids) {
    tailwave::CheckResult r;
    try {
      r = tailwave::run_criterion(id, cache);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion_" + std::to_string(id);
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    all_pass = all_pass && r.pass;
    std::printf("[%s] criterion %d (%s): %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}

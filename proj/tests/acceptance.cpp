// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include "iso3b/verify.hpp"

#include <cstdio>

int main() {
  bool ok = true;
  iso3b::verify::run_all([&](const iso3b::verify::CriterionResult& r) {
    ok = ok && r.pass;
    std::printf("criterion %2d [%s] %s (%.1fs) %s\n", r.id,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("acceptance: %s\n", ok ? "ALL PASS" : "FAILURES PRESENT");
  return ok ? 0 : 1;
}

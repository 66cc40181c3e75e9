#pragma once

#include <functional>
#include <string>
#include <vector>

namespace iso3b::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs one criterion (1..14).
CriterionResult run_criterion(int id);

// Runs the full suite in order; invokes the callback after each criterion.
std::vector<CriterionResult> run_all(
    const std::function<void(const CriterionResult&)>& on_result = {});

bool all_pass(const std::vector<CriterionResult>& rs);

}  // namespace iso3b::verify

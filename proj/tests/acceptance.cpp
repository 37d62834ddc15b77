// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <iostream>

#include "burgers/verify.hpp"

int main() {
  int failed = 0;
  burgers::run_acceptance({}, [&](const burgers::CriterionResult& r) {
    std::cout << burgers::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  });
  std::cout << (burgers::kCriteriaCount - failed) << "/" << burgers::kCriteriaCount
            << " criteria passed" << std::endl;
  return failed;
}

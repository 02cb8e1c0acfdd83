#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace unram {

struct VerifyOptions {
  int threads = 1;
  uint64_t seed = 20240611;
};

// one truncated computation and whether its stabilization ladder held
struct LadderRecord {
  std::string label;
  int64_t runs = 0;
  int64_t stable = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = true;
  std::vector<std::string> lines;
  std::vector<LadderRecord> ladders;
  double seconds = 0;  // wall time, kept out of serialized output
  std::string str() const;  // "PASS 3 volume identity" then indented lines
};

constexpr int kCriteria = 10;
const std::string& criterion_name(int id);

/*
 * Criterion 10 reads the ladders of 1-6.  run_criterion(10) recomputes them;
 * run_criteria reuses any of 1-6 already in the list.
 */
CriterionResult run_criterion(int id, const VerifyOptions& opt);
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const VerifyOptions& opt);

}  // namespace unram

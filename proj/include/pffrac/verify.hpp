/** @file verify.hpp
 *  @brief Fast self-check suite behind `pffrac verify`.
 */
#pragma once

#include <string>
#include <vector>

namespace pffrac {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs every check; completes even when some fail.
std::vector<VerifyResult> run_verification();

}  // namespace pffrac

#pragma once

#include <string>
#include <vector>

namespace ptorsion::verify {

struct CheckRow {
  std::string check;
  std::string fixture;
  std::string norm;
  double p = 0.0;
  double q = 0.0;     // 0 when the check has no q
  double beta = 0.0;  // (p-1)/(n(p-1)+p) in effect for the row
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// Invariant suite over the built-in fixture set: homogeneity, translation
// invariance, two-formula consistency, Radon-Nikodym density, Polya-Szego
// bound, and the variational derivative.  quick trades mesh resolution and
// fixture count for a sub-minute runtime (thresholds are relaxed to match).
std::vector<CheckRow> run_suite(bool quick, unsigned seed);

std::string to_csv(const std::vector<CheckRow>& rows);

bool all_passed(const std::vector<CheckRow>& rows);

}  // namespace ptorsion::verify

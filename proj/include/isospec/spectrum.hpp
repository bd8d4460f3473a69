#pragma once

#include <string>
#include <vector>

#include "isospec/linalg.hpp"

namespace isospec {

// Sorted eigenvalues with multiplicities obtained by clustering raw values at
// a tolerance. cluster_diameter records how wide each cluster actually is so
// set-level comparisons stay auditable.
struct SpectrumReport {
  std::vector<double> values;        // cluster representatives, ascending
  std::vector<int> multiplicities;   // >= 1, sum equals raw dimension
  std::vector<double> diameters;     // per-cluster spread
  double cluster_tolerance = 1e-7;
  std::string provenance;
  bool ambiguous = false;  // some cluster diameter exceeded the audit bound

  int dimension() const;
  std::string to_text() const;
  static SpectrumReport from_values(const Vec& raw, double tol, const std::string& provenance,
                                    double diameter_bound = 1e-8);
};

enum class SpectrumCompareMode { Multiset, Set };

struct SpectrumVerdict {
  bool pass = false;
  double deviation = 0.0;     // multiset: max sorted deviation; set: Hausdorff distance
  bool left_subset = false;   // set mode: left values contained in right (subtonal direction)
  bool right_subset = false;  // set mode: right values contained in left
  std::string detail;
};

SpectrumVerdict compare_spectra(const SpectrumReport& a, const SpectrumReport& b, SpectrumCompareMode mode,
                                double tol);

}  // namespace isospec

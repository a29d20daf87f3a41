#pragma once

#include <string>
#include <vector>

#include "segver/vafa_intriligator.hpp"

namespace segver {

/// One oracle of the calibration battery.
struct CalibrationTest {
  enum class Kind {
    /// vi_sum(instances[0]) == expected
    Equals,
    /// all vi_sum(instances[i]) agree
    AllEqual,
    /// vi_sum(instances[0]) > 0
    Positive,
  };
  std::string group;
  std::string label;
  Kind kind = Kind::Equals;
  std::vector<VIInstance> instances;
  Integer expected;
};

/// The default battery:
///  grassmannian  vi(n = r + l, r, g = 0, d = 0, N = l) = 1, 1 <= r, l <= 4
///  rank-one      vi(n, 1, g, d, N) = n^g, g in {2,3}, n in {2,3,4}, d in {10, 11}
///  d-shift       triangle instances at d', d'+r, d'+2r agree
///  positivity    Verlinde numbers of odd-degree rank-2 and rank-3 moduli are positive
std::vector<CalibrationTest> standard_battery();

/// The Grassmannian and rank-one groups only.
std::vector<CalibrationTest> closed_form_battery();

struct CalibrationOutcome {
  VIConvention convention;
  /// One entry per battery test.
  std::vector<bool> passed;
  /// Observed value (or error) per test, for the report matrix.
  std::vector<std::string> observed;

  bool all_passed() const;
};

struct CalibrationResult {
  std::vector<CalibrationTest> battery;
  std::vector<CalibrationOutcome> outcomes;

  std::vector<VIConvention> survivors() const;
  /// Full pass/fail matrix, one line per convention.
  std::string matrix() const;
};

/// Runs every candidate against every test (the battery is conjunctive).
CalibrationResult run_battery(const std::vector<VIConvention>& search_space,
                              const std::vector<CalibrationTest>& battery, const VIOptions& options = {});

/// Returns the unique surviving convention.  Throws CalibrationFailure
/// carrying the full matrix when zero or several survive, or when the search
/// space is empty.
VIConvention calibrate(const std::vector<VIConvention>& search_space,
                       const std::vector<CalibrationTest>& battery = standard_battery(),
                       const VIOptions& options = {});

}  // namespace segver

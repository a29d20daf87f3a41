#include "segver/calibration.hpp"

#include <sstream>

#include "segver/error.hpp"
#include "segver/triangle.hpp"

namespace segver {
namespace {

std::vector<VIInstance> shifted_instances(const ModuliInput& in, int shifts) {
  std::vector<VIInstance> out;
  const std::int64_t base = floor_degree(in);
  for (int s = 0; s <= shifts; ++s) out.push_back(derive_params(in, base + s * in.r).quot_instance(in));
  return out;
}

std::string label_of(const ModuliInput& in) {
  return "g=" + std::to_string(in.g) + ",r=" + std::to_string(in.r) + ",d=" + std::to_string(in.d) +
         ",l=" + std::to_string(in.level);
}

}  // namespace

std::vector<CalibrationTest> closed_form_battery() {
  std::vector<CalibrationTest> tests;
  for (int r = 1; r <= 4; ++r) {
    for (int l = 1; l <= 4; ++l) {
      tests.push_back({"grassmannian", "G(" + std::to_string(r) + "," + std::to_string(r + l) + ")",
                       CalibrationTest::Kind::Equals, {VIInstance(r + l, r, 0, 0, l)}, Integer(1)});
    }
  }
  for (int g : {2, 3}) {
    for (int n : {2, 3, 4}) {
      for (int d : {10, 11}) {
        const std::int64_t exponent = static_cast<std::int64_t>(n) * d - (n - 1) * (g - 1);
        Integer expected;
        mpz_ui_pow_ui(expected.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(g));
        tests.push_back({"rank-one",
                         "n=" + std::to_string(n) + ",g=" + std::to_string(g) + ",d=" + std::to_string(d),
                         CalibrationTest::Kind::Equals, {VIInstance(n, 1, g, d, exponent)}, expected});
      }
    }
  }
  return tests;
}

std::vector<CalibrationTest> standard_battery() {
  auto tests = closed_form_battery();
  for (int r : {2, 3}) {
    for (int l : {1, 2}) {
      for (int d : {0, 1}) {
        const ModuliInput in{2, r, d, l};
        tests.push_back({"d-shift", label_of(in), CalibrationTest::Kind::AllEqual, shifted_instances(in, 2), Integer(0)});
      }
    }
  }
  for (int g : {2, 3}) {
    for (int r : {2, 3}) {
      const ModuliInput in{g, r, 1, 1};
      tests.push_back({"positivity", label_of(in), CalibrationTest::Kind::Positive, shifted_instances(in, 0), Integer(0)});
    }
  }
  return tests;
}

bool CalibrationOutcome::all_passed() const {
  for (bool b : passed) {
    if (!b) return false;
  }
  return true;
}

std::vector<VIConvention> CalibrationResult::survivors() const {
  std::vector<VIConvention> out;
  for (const auto& o : outcomes) {
    if (o.all_passed()) out.push_back(o.convention);
  }
  return out;
}

std::string CalibrationResult::matrix() const {
  std::ostringstream os;
  for (const auto& o : outcomes) {
    std::size_t fails = 0;
    for (bool b : o.passed) fails += b ? 0 : 1;
    os << o.convention.key() << ": " << (fails == 0 ? "PASS" : "FAIL") << " (" << (o.passed.size() - fails) << "/"
       << o.passed.size() << ")";
    for (std::size_t i = 0; i < o.passed.size(); ++i) {
      if (!o.passed[i]) {
        os << " [" << battery[i].group << " " << battery[i].label << " -> " << o.observed[i] << "]";
        break;
      }
    }
    os << '\n';
  }
  return os.str();
}

CalibrationResult run_battery(const std::vector<VIConvention>& search_space,
                              const std::vector<CalibrationTest>& battery, const VIOptions& options) {
  CalibrationResult result;
  result.battery = battery;
  for (const auto& conv : search_space) {
    CalibrationOutcome outcome;
    outcome.convention = conv;
    for (const auto& test : battery) {
      bool ok = false;
      std::string observed;
      try {
        std::vector<Integer> values;
        for (const auto& inst : test.instances) values.push_back(vi_sum(inst, conv, options));
        for (std::size_t i = 0; i < values.size(); ++i) observed += (i ? "," : "") + to_string(values[i]);
        switch (test.kind) {
          case CalibrationTest::Kind::Equals:
            ok = values.front() == test.expected;
            break;
          case CalibrationTest::Kind::AllEqual:
            ok = true;
            for (const auto& v : values) ok = ok && v == values.front();
            break;
          case CalibrationTest::Kind::Positive:
            ok = values.front() > 0;
            break;
        }
      } catch (const CalibrationFailure&) {
        observed = "non-integral";
      }
      outcome.passed.push_back(ok);
      outcome.observed.push_back(std::move(observed));
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

VIConvention calibrate(const std::vector<VIConvention>& search_space, const std::vector<CalibrationTest>& battery,
                       const VIOptions& options) {
  if (search_space.empty()) throw CalibrationFailure("calibration failure: empty convention search space");
  const CalibrationResult result = run_battery(search_space, battery, options);
  const auto survivors = result.survivors();
  if (survivors.size() != 1) {
    throw CalibrationFailure("calibration failure: " + std::to_string(survivors.size()) +
                             " conventions pass the battery\n" + result.matrix());
  }
  return survivors.front();
}

}  // namespace segver

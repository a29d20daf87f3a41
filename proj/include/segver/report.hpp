#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "segver/triangle.hpp"

namespace segver {

inline constexpr int kSchemaVersion = 1;

/// Exact integers are emitted as decimal strings so no value is truncated.
nlohmann::json convention_to_json(const VIConvention& c);
VIConvention convention_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const ModuliInput& in, const DerivedParams& p);
/// Includes the alpha record, every check and the record verdict.  Timing is
/// only added when `with_timing` is set, so reports stay byte-stable.
nlohmann::json triangle_to_json(const TriangleReport& rep, bool with_timing = false);
nlohmann::json polynomial_to_json(int g, int r, std::int64_t d, const LevelPolynomial& poly);

/// Columns of the CSV report.
const std::vector<std::string>& csv_columns();
/// One CSV row from a record produced by the functions above; absent
/// columns are left empty.
std::string csv_row(const nlohmann::json& record);

/// Calibration config file: the chosen convention plus the battery summary.
void save_convention(const std::string& path, const VIConvention& c, const nlohmann::json& summary);
/// Throws InvalidInput when the file is missing or malformed.
VIConvention load_convention(const std::string& path);

}  // namespace segver

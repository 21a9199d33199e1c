// Serialization of experiment results: CSV tables, JSON documents, two-column curve files,
// checksums and atomic writes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lcl/circlaw.hpp"
#include "lcl/limiting.hpp"
#include "lcl/resolvent.hpp"

namespace lcl {

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits, '.' decimal point; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);
std::string format_complex(Complex z);
/// Accepts "a", "bi", "a+bi", "a-bi" (also with j or spaces around the sign).
Complex parse_complex(std::string_view text);

/// RFC 4180 table: header line, then one line per row, CRLF-free ("\n" line ends).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

CsvTable density_csv(const DensityCurve& c);
CsvTable gamma_csv(const ClassicalLocations& g);
CsvTable local_law_csv(const LocalLawReport& r);
CsvTable local_law_slopes_csv(const LocalLawReport& r);
CsvTable scaling_csv(const ScalingReport& r);
CsvTable rigidity_csv(const RigidityReport& r);
CsvTable rigidity_scaling_csv(const RigidityScaling& r);
CsvTable smallest_csv(const SmallestSVReport& r);
/// Two columns: name,value.
CsvTable key_value_csv(const nlohmann::ordered_json& flat);

nlohmann::ordered_json to_json(const DensityCurve& c);
nlohmann::ordered_json to_json(const ClassicalLocations& g);
nlohmann::ordered_json to_json(const McValue& v);
nlohmann::ordered_json to_json(const RegimeReport& r);
nlohmann::ordered_json to_json(const IdentityReport& r);
nlohmann::ordered_json to_json(const LocalLawReport& r);
nlohmann::ordered_json to_json(const ScalingReport& r);
nlohmann::ordered_json to_json(const GirkoRichardson& r);
nlohmann::ordered_json to_json(const RigidityReport& r);
nlohmann::ordered_json to_json(const RigidityScaling& r);
nlohmann::ordered_json to_json(const SmallestSVReport& r);

/// Top-level report object: {"schema_version", "report", ...body}.
nlohmann::ordered_json json_document(std::string_view report, const nlohmann::ordered_json& body);
/// Stable text form (2-space indent, trailing newline); non-finite numbers become strings.
std::string dump_json(const nlohmann::ordered_json& j);

/// Two-column whitespace-separated data with '#' comment lines.
struct Curve {
  std::vector<std::string> comments;
  std::vector<std::pair<double, double>> points;

  std::string str() const;
};

Curve density_curve_dat(const DensityCurve& c);
/// One curve per a: (log N, log median_err), with the fitted slope in a comment.
std::vector<Curve> scaling_curves(const ScalingReport& r);
/// One curve per energy of the grid: (eta, median N eta Lambda).
std::vector<Curve> sweep_curves(const LocalLawReport& r);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a64(std::string_view bytes);

/// Writes to "<path>.tmp" and renames over path; throws std::runtime_error on I/O failure.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace lcl

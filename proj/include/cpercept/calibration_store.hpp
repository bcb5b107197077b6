#pragma once

// Human calibration outcomes: data model, JSON Lines persistence and
// descriptive aggregation.
//
// File layout: a header line {"schema":1} followed by one record per line.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpercept/opacity.hpp"
#include "json.hpp"

namespace cpercept {

inline constexpr int kSessionSchema = 1;

struct CalibrationRecord {
  std::string subject_tag;
  /// Free-form; "key:value" tags can be grouped on by key.
  std::vector<std::string> group_tags;
  OpacityModel model;
  double s;
  double l_p;
  std::string background;
  /// UTC seconds.
  std::int64_t timestamp;
  std::string ui_version;

  bool operator==(const CalibrationRecord&) const = default;
};

nlohmann::json record_to_json(const CalibrationRecord& record);
/// Throws ValidationError naming the missing or mistyped field.
CalibrationRecord record_from_json(const nlohmann::json& j);

std::vector<std::string> record_findings(const CalibrationRecord& record);

class CalibrationStore {
 public:
  /// Store without a backing file.
  CalibrationStore() = default;

  /// Opens (creating if needed) a JSONL file. Existing records are loaded
  /// as-is; invalid ones are kept but excluded from aggregation.
  /// Throws ParseError on malformed content.
  static CalibrationStore open(const std::filesystem::path& path);

  /// Validates, rejects duplicate (subject_tag, timestamp) keys, then persists.
  /// Throws ValidationError.
  void append(const CalibrationRecord& record);

  std::span<const CalibrationRecord> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  std::optional<std::filesystem::path> path_;
  std::vector<CalibrationRecord> records_;
  std::set<std::pair<std::string, std::int64_t>> keys_;
};

struct CoefficientStats {
  /// e.g. "power2.b1" or "affine.a0"
  std::string name;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double iqr = 0.0;
};

struct GroupStats {
  std::string group;
  std::size_t count = 0;
  std::vector<CoefficientStats> coefficients;
  /// Mean opacity over the group's records on the report grid.
  std::vector<double> mean_curve;
};

struct AggregateReport {
  std::vector<double> grid;
  std::vector<GroupStats> groups;
  /// Records excluded for failing validation.
  std::size_t rejects = 0;
  /// Largest L-infinity distance between any two group mean curves.
  double disagreement = 0.0;
};

inline constexpr int kAggregateGridPoints = 101;

/// Without `group_by` every valid record lands in one group named "all".
/// With a key, a record tagged "key:value" lands in group "value"; records
/// without such a tag land in "(none)". Throws ValidationError when there is
/// no valid record.
AggregateReport aggregate(std::span<const CalibrationRecord> records,
                          const std::optional<std::string>& group_by = std::nullopt);

inline AggregateReport aggregate(const CalibrationStore& store,
                                 const std::optional<std::string>& group_by = std::nullopt) {
  return aggregate(store.records(), group_by);
}

nlohmann::json report_to_json(const AggregateReport& report);

struct SessionFinding {
  std::size_t line;
  std::string message;
};

struct SessionReport {
  std::size_t records = 0;
  std::vector<SessionFinding> findings;

  bool clean() const noexcept { return findings.empty(); }
};

/// Checks a session file: header, record schema, record invariants and
/// duplicate keys. Throws ParseError for text that is not JSON.
SessionReport validate_session(std::istream& in);

}  // namespace cpercept

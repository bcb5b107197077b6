#include "cpercept/calibration_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cpercept/errors.hpp"

namespace cpercept {
namespace {

using nlohmann::json;

template <class T>
T required(const json& j, const char* field) {
  if (!j.contains(field)) throw ValidationError(std::string("missing field \"") + field + "\"");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("field \"") + field + "\" has the wrong type");
  }
}

json parse_line(const std::string& text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line);
  }
}

bool is_header(const json& j) {
  return j.is_object() && j.contains("schema") && j["schema"].is_number_integer() &&
         j["schema"].get<int>() == kSessionSchema;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const auto lo = std::size_t(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - double(lo)) * (sorted[hi] - sorted[lo]);
}

CoefficientStats summarize(std::string name, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  CoefficientStats stats;
  stats.name = std::move(name);
  stats.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / double(values.size());
  stats.median = quantile(values, 0.5);
  stats.iqr = quantile(values, 0.75) - quantile(values, 0.25);
  return stats;
}

std::vector<std::pair<std::string, double>> named_coefficients(const OpacityModel& model) {
  std::vector<std::pair<std::string, double>> out;
  if (const auto* power = model.as_power()) {
    const auto b = power->exponent.coefficients();
    const std::string prefix = "power" + std::to_string(power->exponent.degree()) + ".b";
    for (std::size_t i = 0; i < b.size(); ++i) out.emplace_back(prefix + std::to_string(i), b[i]);
  } else {
    out.emplace_back("affine.a0", model.as_affine()->a0);
    out.emplace_back("affine.a1", model.as_affine()->a1);
  }
  return out;
}

std::string group_of(const CalibrationRecord& record, const std::optional<std::string>& group_by) {
  if (!group_by) return "all";
  const std::string prefix = *group_by + ":";
  for (const auto& tag : record.group_tags) {
    if (tag.starts_with(prefix)) return tag.substr(prefix.size());
  }
  return "(none)";
}

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

}  // namespace

json record_to_json(const CalibrationRecord& record) {
  return json{
      {"subject_tag", record.subject_tag}, {"group_tags", record.group_tags}, {"model", record.model},
      {"s", record.s},
      {"l_p", record.l_p},
      {"background", record.background},
      {"timestamp", record.timestamp},
      {"ui_version", record.ui_version},
  };
}

CalibrationRecord record_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  if (!j.contains("model")) throw ValidationError("missing field \"model\"");
  return CalibrationRecord{
      required<std::string>(j, "subject_tag"),
      required<std::vector<std::string>>(j, "group_tags"),
      j["model"].get<OpacityModel>(),
      required<double>(j, "s"),
      required<double>(j, "l_p"),
      required<std::string>(j, "background"),
      required<std::int64_t>(j, "timestamp"),
      required<std::string>(j, "ui_version"),
  };
}

std::vector<std::string> record_findings(const CalibrationRecord& record) {
  auto findings = model_findings(record.model);
  if (record.subject_tag.empty()) findings.emplace_back("subject_tag is empty");
  if (!(record.s > 0.0 && record.s <= 1.0)) {
    std::ostringstream msg;
    msg << "s = " << record.s << " is outside (0,1]";
    findings.push_back(msg.str());
  }
  if (!(record.l_p >= 0.0 && record.l_p <= 1.0)) {
    std::ostringstream msg;
    msg << "l_p = " << record.l_p << " is outside [0,1]";
    findings.push_back(msg.str());
  }
  return findings;
}

CalibrationStore CalibrationStore::open(const std::filesystem::path& path) {
  CalibrationStore store;
  store.path_ = path;
  if (!std::filesystem::exists(path) || std::filesystem::file_size(path) == 0) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + path.string());
    out << json{{"schema", kSessionSchema}}.dump() << '\n';
    return store;
  }

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string text;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const json j = parse_line(text, line);
    if (!header_seen) {
      if (!is_header(j)) throw ParseError("expected header {\"schema\":1}", line);
      header_seen = true;
      continue;
    }
    std::optional<CalibrationRecord> record;
    try {
      record = record_from_json(j);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line);
    }
    if (!store.keys_.emplace(record->subject_tag, record->timestamp).second) {
      throw ParseError("duplicate record for subject \"" + record->subject_tag + "\"", line);
    }
    store.records_.push_back(std::move(*record));
  }
  return store;
}

void CalibrationStore::append(const CalibrationRecord& record) {
  if (const auto findings = record_findings(record); !findings.empty()) {
    throw ValidationError("invalid calibration record: " + joined(findings));
  }
  const auto key = std::pair{record.subject_tag, record.timestamp};
  if (keys_.contains(key)) {
    throw ValidationError("duplicate record for subject \"" + record.subject_tag + "\" at timestamp " +
                          std::to_string(record.timestamp));
  }
  if (path_) {
    std::ofstream out(*path_, std::ios::app);
    out << record_to_json(record).dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("appending to " + path_->string() + " failed");
  }
  keys_.insert(key);
  records_.push_back(record);
}

AggregateReport aggregate(std::span<const CalibrationRecord> records, const std::optional<std::string>& group_by) {
  AggregateReport report;
  std::map<std::string, std::vector<const CalibrationRecord*>> groups;
  for (const auto& record : records) {
    if (!record_findings(record).empty()) {
      ++report.rejects;
      continue;
    }
    groups[group_of(record, group_by)].push_back(&record);
  }
  if (groups.empty()) throw ValidationError("no valid calibration records to aggregate");

  report.grid.resize(kAggregateGridPoints);
  for (int i = 0; i < kAggregateGridPoints; ++i) report.grid[std::size_t(i)] = double(i) / (kAggregateGridPoints - 1);

  for (const auto& [name, members] : groups) {
    GroupStats stats;
    stats.group = name;
    stats.count = members.size();

    std::map<std::string, std::vector<double>> values;
    stats.mean_curve.assign(report.grid.size(), 0.0);
    for (const auto* record : members) {
      for (auto& [coefficient, value] : named_coefficients(record->model)) values[coefficient].push_back(value);
      for (std::size_t i = 0; i < report.grid.size(); ++i) {
        stats.mean_curve[i] += opacity(record->model, report.grid[i]);
      }
    }
    for (double& v : stats.mean_curve) v /= double(members.size());
    for (auto& [coefficient, vals] : values) stats.coefficients.push_back(summarize(coefficient, std::move(vals)));
    report.groups.push_back(std::move(stats));
  }

  for (std::size_t a = 0; a < report.groups.size(); ++a) {
    for (std::size_t b = a + 1; b < report.groups.size(); ++b) {
      const auto& ca = report.groups[a].mean_curve;
      const auto& cb = report.groups[b].mean_curve;
      for (std::size_t i = 0; i < ca.size(); ++i) {
        report.disagreement = std::max(report.disagreement, std::abs(ca[i] - cb[i]));
      }
    }
  }
  return report;
}

json report_to_json(const AggregateReport& report) {
  json groups = json::array();
  for (const auto& g : report.groups) {
    json coefficients = json::array();
    for (const auto& c : g.coefficients) {
      coefficients.push_back(
          {{"name", c.name}, {"count", c.count}, {"mean", c.mean}, {"median", c.median}, {"iqr", c.iqr}});
    }
    groups.push_back({{"group", g.group}, {"count", g.count}, {"coefficients", coefficients},
                      {"mean_curve", g.mean_curve}});
  }
  return {{"grid", report.grid}, {"groups", groups}, {"rejects", report.rejects},
          {"disagreement", report.disagreement}};
}

SessionReport validate_session(std::istream& in) {
  SessionReport report;
  std::set<std::pair<std::string, std::int64_t>> keys;
  std::string text;
  std::size_t line = 0;
  bool header_seen = false;

  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const json j = parse_line(text, line);
    if (!header_seen) {
      header_seen = true;
      if (!is_header(j)) {
        report.findings.push_back({line, "first line is not the header {\"schema\":1}"});
      }
      continue;
    }
    ++report.records;
    std::optional<CalibrationRecord> record;
    try {
      record = record_from_json(j);
    } catch (const ValidationError& e) {
      report.findings.push_back({line, e.what()});
      continue;
    }
    for (auto& f : record_findings(*record)) report.findings.push_back({line, std::move(f)});
    if (!keys.emplace(record->subject_tag, record->timestamp).second) {
      report.findings.push_back({line, "duplicate (subject_tag, timestamp)"});
    }
  }
  if (!header_seen) report.findings.push_back({0, "session file is empty"});
  return report;
}

}  // namespace cpercept

#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "esshist/evaluate.hpp"
#include "esshist/histogram.hpp"
#include "esshist/inference.hpp"
#include "esshist/sample.hpp"

namespace esshist {

/// One value per line; blank lines are skipped and a single non-numeric
/// first line is taken as a header. Parsing ignores the C locale.
std::vector<double> parse_sample_text(std::istream& in);
std::vector<double> read_sample_file(const std::string& path);

std::string histogram_to_json(const HistogramModel& h);
HistogramModel histogram_from_json(const std::string& text);

struct FeatureDocument {
  double alpha = 0.0;
  double kappa = 0.0;
  std::vector<FeatureInterval> features;
  int modes_lb = 0;
  int troughs_lb = 0;
  friend bool operator==(const FeatureDocument&, const FeatureDocument&) = default;
};

std::string features_to_json(const FeatureDocument& doc);
FeatureDocument features_from_json(const std::string& text);

struct AuditDocument {
  double alpha = 0.0;
  std::vector<IntervalSpec> violations;
  std::vector<double> violation_left, violation_right;
  std::vector<RemovablePoint> removable;
  friend bool operator==(const AuditDocument&, const AuditDocument&) = default;
};

AuditDocument make_audit_document(const SortedSample& sample, const AuditReport& report,
                                  double alpha);
std::string audit_to_json(const AuditDocument& doc);
AuditDocument audit_from_json(const std::string& text);

/// Which document a JSON text holds, from its "format" field.
enum class DocumentKind { kHistogram, kFeatures, kAudit, kQuantiles, kUnknown };
DocumentKind detect_document(const std::string& text);

/// (x, y) step coordinates: two points per bin.
std::string histogram_step_csv(const HistogramModel& h);
/// left,right,direction,margin per feature.
std::string features_csv(const FeatureDocument& doc);
FeatureDocument features_from_csv(const std::string& text);
/// Violation rows, removable rows and a location/cover-count series.
std::string audit_csv(const AuditDocument& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace esshist

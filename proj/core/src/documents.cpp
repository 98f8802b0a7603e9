#include "esshist/documents.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "esshist/errors.hpp"

namespace esshist {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

json parse_json(const std::string& text, const char* expected) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON document: ") + e.what());
  }
  if (doc.value("format", "") != expected) {
    throw DataError(std::string("expected a document of format '") + expected + "'");
  }
  return doc;
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid document field: ") + e.what());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<double> parse_sample_text(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto v = parse_double(t);
    if (!v) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw DataError("line " + std::to_string(line_no) + ": not a number: '" + t + "'");
    }
    seen_content = true;
    values.push_back(*v);
  }
  return values;
}

std::vector<double> read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read input file '" + path + "'");
  return parse_sample_text(in);
}

std::string histogram_to_json(const HistogramModel& h) {
  ordered_json doc;
  doc["format"] = "esshist-histogram";
  doc["n"] = h.n;
  doc["breaks"] = h.breaks;
  doc["heights"] = h.heights;
  if (!h.counts.empty()) doc["counts"] = h.counts;
  return doc.dump(2);
}

HistogramModel histogram_from_json(const std::string& text) {
  const auto doc = parse_json(text, "esshist-histogram");
  HistogramModel h = guarded([&] {
    HistogramModel out;
    out.n = doc.at("n").get<std::size_t>();
    out.breaks = doc.at("breaks").get<std::vector<double>>();
    out.heights = doc.at("heights").get<std::vector<double>>();
    if (doc.contains("counts")) out.counts = doc.at("counts").get<std::vector<std::size_t>>();
    return out;
  });
  h.validate();
  return h;
}

std::string features_to_json(const FeatureDocument& doc) {
  ordered_json out;
  out["format"] = "esshist-features";
  out["alpha"] = doc.alpha;
  out["kappa"] = doc.kappa;
  out["modes_lb"] = doc.modes_lb;
  out["troughs_lb"] = doc.troughs_lb;
  out["features"] = ordered_json::array();
  for (const auto& f : doc.features) {
    ordered_json row;
    row["left"] = f.left;
    row["right"] = f.right;
    row["left_index"] = f.left_j;
    row["right_index"] = f.right_k;
    row["direction"] = to_string(f.direction);
    row["margin"] = f.margin;
    row["witnesses"] = {{f.first.j, f.first.k, f.first.scale},
                        {f.second.j, f.second.k, f.second.scale}};
    out["features"].push_back(row);
  }
  return out.dump(2);
}

FeatureDocument features_from_json(const std::string& text) {
  const auto doc = parse_json(text, "esshist-features");
  return guarded([&] {
    FeatureDocument out;
    out.alpha = doc.at("alpha").get<double>();
    out.kappa = doc.at("kappa").get<double>();
    out.modes_lb = doc.at("modes_lb").get<int>();
    out.troughs_lb = doc.at("troughs_lb").get<int>();
    for (const auto& row : doc.at("features")) {
      FeatureInterval f;
      f.left = row.at("left").get<double>();
      f.right = row.at("right").get<double>();
      f.left_j = row.at("left_index").get<std::size_t>();
      f.right_k = row.at("right_index").get<std::size_t>();
      const auto dir = row.at("direction").get<std::string>();
      if (dir != "increase" && dir != "decrease") throw DataError("bad feature direction '" + dir + "'");
      f.direction = dir == "increase" ? Direction::kIncrease : Direction::kDecrease;
      f.margin = row.at("margin").get<double>();
      const auto& w = row.at("witnesses");
      f.first = {w.at(0).at(0).get<std::size_t>(), w.at(0).at(1).get<std::size_t>(),
                 w.at(0).at(2).get<int>()};
      f.second = {w.at(1).at(0).get<std::size_t>(), w.at(1).at(1).get<std::size_t>(),
                  w.at(1).at(2).get<int>()};
      out.features.push_back(f);
    }
    return out;
  });
}

AuditDocument make_audit_document(const SortedSample& sample, const AuditReport& report,
                                  double alpha) {
  AuditDocument doc;
  doc.alpha = alpha;
  doc.violations = report.violations;
  for (const auto& iv : report.violations) {
    doc.violation_left.push_back(sample.at(iv.j));
    doc.violation_right.push_back(sample.at(iv.k));
  }
  doc.removable = report.removable;
  return doc;
}

std::string audit_to_json(const AuditDocument& doc) {
  ordered_json out;
  out["format"] = "esshist-audit";
  out["alpha"] = doc.alpha;
  out["violations"] = ordered_json::array();
  for (std::size_t i = 0; i < doc.violations.size(); ++i) {
    ordered_json row;
    row["j"] = doc.violations[i].j;
    row["k"] = doc.violations[i].k;
    row["scale"] = doc.violations[i].scale;
    row["left"] = doc.violation_left[i];
    row["right"] = doc.violation_right[i];
    out["violations"].push_back(row);
  }
  out["removable"] = ordered_json::array();
  for (const auto& r : doc.removable) {
    ordered_json row;
    row["index"] = r.index;
    row["value"] = r.value;
    row["multiplicity"] = r.multiplicity;
    out["removable"].push_back(row);
  }
  return out.dump(2);
}

AuditDocument audit_from_json(const std::string& text) {
  const auto doc = parse_json(text, "esshist-audit");
  return guarded([&] {
    AuditDocument out;
    out.alpha = doc.at("alpha").get<double>();
    for (const auto& row : doc.at("violations")) {
      out.violations.push_back({row.at("j").get<std::size_t>(), row.at("k").get<std::size_t>(),
                                row.at("scale").get<int>()});
      out.violation_left.push_back(row.at("left").get<double>());
      out.violation_right.push_back(row.at("right").get<double>());
    }
    for (const auto& row : doc.at("removable")) {
      out.removable.push_back({row.at("index").get<std::size_t>(), row.at("value").get<double>(),
                               row.at("multiplicity").get<std::size_t>()});
    }
    return out;
  });
}

DocumentKind detect_document(const std::string& text) {
  try {
    const auto doc = json::parse(text);
    const auto format = doc.value("format", "");
    if (format == "esshist-histogram") return DocumentKind::kHistogram;
    if (format == "esshist-features") return DocumentKind::kFeatures;
    if (format == "esshist-audit") return DocumentKind::kAudit;
    if (format == "esshist-quantiles") return DocumentKind::kQuantiles;
  } catch (const json::exception&) {
  }
  return DocumentKind::kUnknown;
}

std::string histogram_step_csv(const HistogramModel& h) {
  std::ostringstream os;
  os << "x,y\n";
  for (std::size_t b = 0; b < h.bins(); ++b) {
    os << fmt(h.breaks[b]) << ',' << fmt(h.heights[b]) << '\n';
    os << fmt(h.breaks[b + 1]) << ',' << fmt(h.heights[b]) << '\n';
  }
  return os.str();
}

std::string features_csv(const FeatureDocument& doc) {
  std::ostringstream os;
  os << "left,right,direction,margin,left_index,right_index\n";
  for (const auto& f : doc.features) {
    os << fmt(f.left) << ',' << fmt(f.right) << ',' << to_string(f.direction) << ','
       << fmt(f.margin) << ',' << f.left_j << ',' << f.right_k << '\n';
  }
  return os.str();
}

FeatureDocument features_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (trim(line) != "left,right,direction,margin,left_index,right_index") {
    throw DataError("not a feature CSV");
  }
  FeatureDocument doc;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != 6) throw DataError("feature CSV row needs 6 cells");
    FeatureInterval f;
    const auto left = parse_double(cells[0]), right = parse_double(cells[1]),
               margin = parse_double(cells[3]);
    if (!left || !right || !margin) throw DataError("feature CSV: bad number");
    f.left = *left;
    f.right = *right;
    f.margin = *margin;
    f.direction = cells[2] == "increase" ? Direction::kIncrease : Direction::kDecrease;
    f.left_j = std::stoul(cells[4]);
    f.right_k = std::stoul(cells[5]);
    doc.features.push_back(f);
  }
  return doc;
}

std::string audit_csv(const AuditDocument& doc) {
  std::ostringstream os;
  os << "kind,j,k,left,right\n";
  for (std::size_t i = 0; i < doc.violations.size(); ++i) {
    os << "violation," << doc.violations[i].j << ',' << doc.violations[i].k << ','
       << fmt(doc.violation_left[i]) << ',' << fmt(doc.violation_right[i]) << '\n';
  }
  os << "\nkind,value,multiplicity\n";
  for (const auto& r : doc.removable) {
    os << "removable," << fmt(r.value) << ',' << r.multiplicity << '\n';
  }
  // Cover counts just right of every violation endpoint, for intensity bars.
  std::set<double> marks(doc.violation_left.begin(), doc.violation_left.end());
  marks.insert(doc.violation_right.begin(), doc.violation_right.end());
  os << "\nkind,location,cover_count\n";
  for (double x : marks) {
    std::size_t cover = 0;
    for (std::size_t i = 0; i < doc.violations.size(); ++i) {
      if (x >= doc.violation_left[i] && x < doc.violation_right[i]) ++cover;
    }
    os << "cover," << fmt(x) << ',' << cover << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file '" + path + "'");
  out << text;
  if (!out) throw DataError("failed writing file '" + path + "'");
}

}  // namespace esshist

#include "gtg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <unordered_set>

#include <json.hpp>

#include "gtg/errors.hpp"

namespace gtg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t pos = 0; pos <= line.size(); ++pos) {
    if (pos == line.size() || line[pos] == delimiter) {
      fields.push_back(trim(line.substr(start, pos - start)));
      start = pos + 1;
    }
  }
  return fields;
}

bool parse_cell(std::string_view cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !cell.empty();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError(path + ": cannot open file");
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

// Numeric body of a delimited file; one leading non-numeric row is skipped.
Matrix parse_numeric_body(const std::string& path, const std::vector<std::string>& lines,
                          char delimiter) {
  if (lines.empty()) {
    throw FormatError(path + ": no data rows");
  }
  std::size_t first_row = 0;
  {
    double v = 0.0;
    const auto fields = split_fields(lines[0], delimiter);
    const bool numeric = std::all_of(fields.begin(), fields.end(),
                                     [&](std::string_view f) { return parse_cell(f, v); });
    if (!numeric) first_row = 1;  // header row
  }
  if (first_row >= lines.size()) {
    throw FormatError(path + ": no data rows after the header");
  }

  Matrix m;
  m.rows = lines.size() - first_row;
  for (std::size_t r = first_row; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r], delimiter);
    if (r == first_row) {
      m.cols = fields.size();
      m.data.reserve(m.rows * m.cols);
    } else if (fields.size() != m.cols) {
      throw FormatError(path + ": row " + std::to_string(r + 1) + " has " +
                        std::to_string(fields.size()) + " cells, expected " +
                        std::to_string(m.cols));
    }
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_cell(f, v)) {
        throw FormatError(path + ": row " + std::to_string(r + 1) +
                          ": cannot parse cell '" + std::string(f) + "' as a number");
      }
      if (!std::isfinite(v)) {
        throw FormatError(path + ": row " + std::to_string(r + 1) +
                          ": non-finite value " + std::string(f));
      }
      m.data.push_back(v);
    }
  }
  return m;
}

}  // namespace

DissimilarityMatrix load_distance_matrix(const std::string& path,
                                         const LoadMatrixOptions& opts) {
  Matrix m = parse_numeric_body(path, read_lines(path), opts.delimiter);
  if (m.rows != m.cols) {
    throw FormatError(path + ": distance matrix must be square, got " +
                      std::to_string(m.rows) + "x" + std::to_string(m.cols));
  }
  for (double v : m.data) {
    if (v < 0.0) {
      throw FormatError(path + ": negative distance " + format_double(v));
    }
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (m(i, i) != 0.0) {
      std::cerr << "warning: " << path << ": nonzero diagonal entry (" << i << "," << i
                << ") = " << format_double(m(i, i)) << " forced to 0\n";
      m(i, i) = 0.0;
    }
  }
  return opts.symmetrize ? symmetrize_max(m) : m;
}

FeatureMatrix load_features(const std::string& path, char delimiter) {
  Matrix m = parse_numeric_body(path, read_lines(path), delimiter);
  if (m.rows < 2) {
    throw InputError(path + ": need at least 2 feature rows, got " +
                     std::to_string(m.rows));
  }
  return m;
}

LabelsData load_labels(const std::string& path, char delimiter) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    throw FormatError(path + ": no rows");
  }
  LabelsData out;
  std::unordered_set<std::string> seen_ids;
  std::vector<std::string> names;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r], delimiter);
    if (fields.empty() || fields.size() > 2) {
      throw FormatError(path + ": row " + std::to_string(r + 1) +
                        ": expected 'player_id" + std::string(1, delimiter) +
                        "class_name', got " + std::to_string(fields.size()) + " fields");
    }
    const std::string id(fields[0]);
    if (id.empty()) {
      throw FormatError(path + ": row " + std::to_string(r + 1) + ": empty player id");
    }
    if (!seen_ids.insert(id).second) {
      throw FormatError(path + ": duplicate player id '" + id + "'");
    }
    out.ids.push_back(id);
    const std::string cls(fields.size() == 2 ? fields[1] : std::string_view{});
    if (cls.empty()) {
      out.assignment.labels.push_back(kUnlabeled);
      continue;
    }
    auto it = std::find(names.begin(), names.end(), cls);
    if (it == names.end()) {
      names.push_back(cls);
      it = std::prev(names.end());
    }
    out.assignment.labels.push_back(static_cast<int>(it - names.begin()));
  }
  if (names.empty()) {
    throw ConfigError(path + ": no labeled rows");
  }
  out.class_names = names;
  out.assignment.n = out.ids.size();
  out.assignment.num_classes = static_cast<int>(names.size());
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    return std::to_string(v);
  }
  return std::string(buf, ptr);
}

void write_matrix(const std::string& path, const Matrix& m, char delimiter) {
  std::ofstream out(path);
  if (!out) {
    throw FormatError(path + ": cannot open for writing");
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) out << delimiter;
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw FormatError(path + ": write failed");
  }
}

void write_predictions(const std::string& path, const GameResult& result,
                       const LabelsData& labels, char delimiter) {
  std::ofstream out(path);
  if (!out) {
    throw FormatError(path + ": cannot open for writing");
  }
  out << "player_id" << delimiter << "predicted_class" << delimiter << "probability\n";
  for (std::size_t i = 0; i < labels.assignment.n; ++i) {
    if (labels.assignment.is_labeled(i)) continue;
    const int pred = result.predictions[i];
    out << labels.ids[i] << delimiter << labels.class_names[static_cast<std::size_t>(pred)]
        << delimiter << format_double(result.space(i, static_cast<std::size_t>(pred)))
        << '\n';
  }
  if (!out) {
    throw FormatError(path + ": write failed");
  }
}

std::string report_to_json(const std::vector<AccuracyReport>& reports,
                           const ReportMeta& meta) {
  nlohmann::ordered_json doc;
  doc["config"] = {
      {"players", meta.players},
      {"classes", meta.classes},
      {"train_per_class", meta.train_per_class},
      {"protocol", meta.protocol},
      {"k", meta.k},
      {"epsilon", meta.epsilon},
      {"max_iters", meta.max_iters},
      {"symmetric_knn", meta.symmetric_knn},
  };
  if (meta.rep_seed) {
    doc["config"]["rep_seed"] = *meta.rep_seed;
  }
  doc["results"] = nlohmann::ordered_json::array();
  for (const auto& report : reports) {
    nlohmann::ordered_json entry = {
        {"classifier", report.classifier},
        {"runs", report.runs},
        {"correct", report.correct},
        {"failed", report.failed},
        {"accuracy", report.accuracy},
        {"confusion", report.confusion},
    };
    if (!report.failure_messages.empty()) {
      entry["failures"] = report.failure_messages;
    }
    doc["results"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace gtg

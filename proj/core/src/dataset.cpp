#include "lord/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lord {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) {
    // trim surrounding whitespace
    const auto begin = field.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      fields.emplace_back();
    } else {
      const auto end = field.find_last_not_of(" \t\r");
      fields.push_back(field.substr(begin, end - begin + 1));
    }
  }
  return fields;
}

bool parse_double(const std::string& text, double* out) {
  try {
    size_t used = 0;
    *out = std::stod(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

void Dataset::validate() const {
  if (n() < 2) throw std::invalid_argument("dataset needs at least 2 samples");
  if (d() < 1) throw std::invalid_argument("dataset needs at least 1 feature");
  if (!features.allFinite())
    throw std::invalid_argument("dataset contains non-finite feature values");
  if (labels) {
    if (static_cast<Eigen::Index>(labels->size()) != n())
      throw std::invalid_argument("label count does not match sample count");
    const int k = num_classes();
    std::vector<long> counts(k, 0);
    for (int label : *labels) {
      if (label < 0 || label >= k)
        throw std::invalid_argument("label outside {0..k-1}");
      ++counts[label];
    }
    for (int j = 0; j < k; ++j)
      if (counts[j] == 0)
        throw std::invalid_argument("class " + std::to_string(j) + " is empty");
  }
}

int Dataset::num_classes() const {
  if (!labels || labels->empty()) return 0;
  return *std::max_element(labels->begin(), labels->end()) + 1;
}

Dataset load_csv(const std::string& path, bool label_column) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open CSV file: " + path);

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  bool first = true;
  size_t width = 0;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto& field : fields) {
      double value = 0;
      if (!parse_double(field, &value)) {
        numeric = false;
        break;
      }
      values.push_back(value);
    }
    if (!numeric) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw std::runtime_error("malformed CSV row in " + path + ": " + line);
    }
    first = false;
    if (width == 0) {
      width = values.size();
    } else if (values.size() != width) {
      throw std::runtime_error("inconsistent column count in " + path);
    }
    if (label_column) {
      const double raw = values.back();
      const int label = static_cast<int>(std::lround(raw));
      if (std::abs(raw - label) > 1e-9)
        throw std::runtime_error("non-integer label value in " + path);
      labels.push_back(label);
      values.pop_back();
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error("empty CSV file: " + path);

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      data.features(static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(j)) = rows[i][j];
  if (label_column) {
    // remap labels to a dense {0..k-1} range preserving order
    std::set<int> distinct(labels.begin(), labels.end());
    std::vector<int> ordered(distinct.begin(), distinct.end());
    for (auto& label : labels) {
      label = static_cast<int>(
          std::lower_bound(ordered.begin(), ordered.end(), label) -
          ordered.begin());
    }
    data.labels = std::move(labels);
  }
  data.validate();
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write CSV file: " + path);
  file.precision(17);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      if (j) file << ',';
      file << data.features(i, j);
    }
    if (data.labels) file << ',' << (*data.labels)[static_cast<size_t>(i)];
    file << '\n';
  }
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open label file: " + path);
  std::vector<int> labels;
  std::string line;
  bool first = true;
  while (std::getline(file, line)) {
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().empty()) continue;
    double value = 0;
    if (!parse_double(fields.front(), &value)) {
      if (first) {
        first = false;
        continue;
      }
      throw std::runtime_error("malformed label line in " + path + ": " + line);
    }
    first = false;
    labels.push_back(static_cast<int>(std::lround(value)));
  }
  if (labels.empty()) throw std::runtime_error("empty label file: " + path);
  return labels;
}

}  // namespace lord

#include "msqp/libsvm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "msqp/errors.hpp"

namespace msqp {

namespace {

struct SparseRow {
  double label;
  std::vector<std::pair<int, double>> entries;
};

double parse_double(std::string_view token, std::size_t line,
                    const char* what) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw ParseError(line, std::string("malformed ") + what + " '" +
                               std::string(token) + "'");
  }
  return value;
}

int parse_index(std::string_view token, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value < 1) {
    throw ParseError(line, "malformed index '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

LabeledData parse_libsvm(std::istream& in, int min_features) {
  std::vector<SparseRow> rows;
  int features = std::max(0, min_features);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos)
      text.erase(hash);
    std::istringstream tokens(text);
    std::string token;
    if (!(tokens >> token)) continue;

    SparseRow row{parse_double(token, line, "label"), {}};
    int last = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos)
        throw ParseError(line, "expected index:value, got '" + token + "'");
      const std::string_view view(token);
      const int index = parse_index(view.substr(0, colon), line);
      if (index <= last)
        throw ParseError(line, "indices must be strictly ascending");
      last = index;
      row.entries.emplace_back(index,
                               parse_double(view.substr(colon + 1), line, "value"));
    }
    features = std::max(features, last);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(0, "no samples in input");

  std::set<double> raw;
  for (const auto& r : rows) raw.insert(r.label);
  if (raw.size() > 2)
    throw ParseError(0, "more than two distinct labels (" +
                            std::to_string(raw.size()) + ")");

  LabeledData data{Matrix::Zero(static_cast<Eigen::Index>(rows.size()), features),
                   Vector(static_cast<Eigen::Index>(rows.size()))};
  const double smaller = *raw.begin();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [index, value] : rows[i].entries) data.X(i, index - 1) = value;
    if (raw.size() == 2) {
      data.labels[i] = rows[i].label == smaller ? -1.0 : 1.0;
    } else {
      data.labels[i] = rows[i].label > 0 ? 1.0 : -1.0;
    }
  }
  return data;
}

LabeledData load_libsvm(const std::string& path, int min_features) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_libsvm(in, min_features);
}

void write_libsvm(std::ostream& out, const LabeledData& data) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    out << (data.labels[i] > 0 ? "+1" : "-1");
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
      if (data.X(i, j) != 0.0) out << ' ' << (j + 1) << ':' << data.X(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace msqp

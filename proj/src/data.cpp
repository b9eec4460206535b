#include "hpdiv/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hpdiv/random.hpp"

namespace hpdiv {

namespace {

using Row = std::vector<std::string>;

// RFC-4180-ish tokenizer: double quotes open a field that may contain the
// delimiter, newlines, and "" escapes. Accepts both LF and CRLF.
std::vector<Row> tokenize(const std::string& text, char delim) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false, any = false;
  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
    any = true;
  };
  auto end_row = [&]() {
    if (any || !row.empty()) {
      end_field();
      rows.push_back(std::move(row));
      row.clear();
    }
    field.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      any = true;
    } else if (c == delim) {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() || any || !row.empty()) end_row();
    } else if (c == '\r') {
      // swallowed; the following \n (if any) ends the row
      if (i + 1 >= text.size() || text[i + 1] != '\n') end_row();
    } else {
      field += c;
      any = true;
    }
  }
  if (!field.empty() || any || !row.empty()) end_row();
  return rows;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_double(const std::string& raw, double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool parse_index(const std::string& s, std::size_t& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  out = static_cast<std::size_t>(std::strtoull(s.c_str(), nullptr, 10));
  return true;
}

char detect_delimiter(const std::string& text) {
  // Count candidates on the first line, outside quotes.
  std::size_t counts[3] = {0, 0, 0};  // comma, semicolon, tab
  bool quoted = false;
  for (char c : text) {
    if (c == '"') quoted = !quoted;
    if (!quoted) {
      if (c == '\n') break;
      if (c == ',') ++counts[0];
      if (c == ';') ++counts[1];
      if (c == '\t') ++counts[2];
    }
  }
  const char cands[3] = {',', ';', '\t'};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (counts[i] > counts[best]) best = i;
  return cands[best];
}

bool row_all_numeric(const Row& row) {
  double tmp;
  for (const std::string& cell : row)
    if (!parse_double(cell, tmp)) return false;
  return true;
}

std::vector<std::size_t> subsample_indices(std::size_t total, std::size_t keep,
                                           rng64& g) {
  std::vector<std::size_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = i;
  // Partial Fisher-Yates: the first `keep` slots end up holding a uniform
  // sample without replacement.
  for (std::size_t i = 0; i < keep; ++i) {
    std::size_t span = total - i;
    auto j = i + std::min(static_cast<std::size_t>(uniform01(g) *
                                                   static_cast<double>(span)),
                          span - 1);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());  // keep original row order
  return idx;
}

void apply_normalize(LabeledPointSet& s, Normalize mode) {
  if (mode == Normalize::none) return;
  const std::size_t d = s.dim();
  const std::size_t total = s.m() + s.n();
  auto at = [&](std::size_t i, std::size_t k) -> double& {
    return i < s.m() ? s.x_points.point(i)[k]
                     : s.y_points.point(i - s.m())[k];
  };
  for (std::size_t k = 0; k < d; ++k) {
    if (mode == Normalize::unit_cube) {
      double lo = at(0, k), hi = at(0, k);
      for (std::size_t i = 1; i < total; ++i) {
        lo = std::min(lo, at(i, k));
        hi = std::max(hi, at(i, k));
      }
      const double span = hi - lo;
      for (std::size_t i = 0; i < total; ++i)
        at(i, k) = span > 0.0 ? (at(i, k) - lo) / span : 0.0;
    } else {
      double mean = 0.0;
      for (std::size_t i = 0; i < total; ++i) mean += at(i, k);
      mean /= static_cast<double>(total);
      double ss = 0.0;
      for (std::size_t i = 0; i < total; ++i)
        ss += (at(i, k) - mean) * (at(i, k) - mean);
      const double sd = std::sqrt(ss / static_cast<double>(total));
      for (std::size_t i = 0; i < total; ++i)
        at(i, k) = sd > 0.0 ? (at(i, k) - mean) / sd : 0.0;
    }
  }
}

}  // namespace

LabeledPointSet load_labeled_csv(const DatasetSpec& spec) {
  std::ifstream in(spec.path, std::ios::binary);
  if (!in)
    throw std::runtime_error("load_labeled_csv: cannot open " + spec.path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (trim(text).empty())
    throw std::runtime_error("load_labeled_csv: empty file " + spec.path);

  const char delim = spec.delimiter ? spec.delimiter : detect_delimiter(text);
  std::vector<Row> rows = tokenize(text, delim);
  if (rows.empty()) throw std::runtime_error("load_labeled_csv: no rows");

  // Header handling: explicit flag wins; otherwise a name-typed label column
  // demands a header, an index-typed one gets auto-detection (header iff the
  // first row is not fully numeric).
  std::size_t label_idx = 0;
  const bool label_is_index = parse_index(spec.label_column, label_idx);
  bool header;
  if (spec.has_header.has_value())
    header = *spec.has_header;
  else
    header = !label_is_index || !row_all_numeric(rows[0]);

  std::map<std::string, std::size_t> by_name;
  if (header)
    for (std::size_t j = 0; j < rows[0].size(); ++j)
      by_name.emplace(trim(rows[0][j]), j);

  auto resolve = [&](const std::string& col) -> std::size_t {
    std::size_t idx;
    if (header) {
      auto it = by_name.find(col);
      if (it != by_name.end()) return it->second;
    }
    if (parse_index(col, idx)) {
      if (idx >= rows[0].size())
        throw std::runtime_error("load_labeled_csv: column index " + col +
                                 " out of range");
      return idx;
    }
    throw std::runtime_error("load_labeled_csv: no column named '" + col + "'");
  };

  label_idx = resolve(spec.label_column);
  std::vector<std::size_t> feat_idx;
  if (spec.feature_columns.empty()) {
    for (std::size_t j = 0; j < rows[0].size(); ++j)
      if (j != label_idx) feat_idx.push_back(j);
  } else {
    for (const std::string& c : spec.feature_columns)
      feat_idx.push_back(resolve(c));
  }
  if (feat_idx.empty())
    throw std::runtime_error("load_labeled_csv: no feature columns");

  const std::size_t first_data = header ? 1 : 0;
  std::string class_x = spec.class_x, class_y = spec.class_y;
  if (class_x.empty() && class_y.empty()) {
    for (std::size_t i = first_data; i < rows.size(); ++i) {
      if (label_idx >= rows[i].size()) continue;
      const std::string lab = trim(rows[i][label_idx]);
      if (class_x.empty()) {
        class_x = lab;
      } else if (lab != class_x) {
        class_y = lab;
        break;
      }
    }
    if (class_y.empty())
      throw std::runtime_error(
          "load_labeled_csv: fewer than 2 distinct labels in file");
  } else if (class_x.empty() || class_y.empty() || class_x == class_y) {
    throw std::invalid_argument(
        "load_labeled_csv: class pair must name two distinct labels");
  }

  std::vector<std::vector<double>> feats[2];
  for (std::size_t i = first_data; i < rows.size(); ++i) {
    const Row& row = rows[i];
    if (label_idx >= row.size())
      throw std::runtime_error("load_labeled_csv: row " + std::to_string(i + 1) +
                               " has too few columns");
    const std::string lab = trim(row[label_idx]);
    int cls = lab == class_x ? 0 : lab == class_y ? 1 : -1;
    if (cls < 0) continue;
    std::vector<double> vals(feat_idx.size());
    for (std::size_t k = 0; k < feat_idx.size(); ++k) {
      if (feat_idx[k] >= row.size())
        throw std::runtime_error("load_labeled_csv: row " +
                                 std::to_string(i + 1) + " has too few columns");
      if (!parse_double(row[feat_idx[k]], vals[k]))
        throw std::runtime_error(
            "load_labeled_csv: non-numeric cell at row " +
            std::to_string(i + 1) + ", column " +
            std::to_string(feat_idx[k] + 1));
    }
    feats[cls].push_back(std::move(vals));
  }
  if (feats[0].empty() || feats[1].empty())
    throw std::runtime_error(
        "load_labeled_csv: a selected class has no rows (labels '" + class_x +
        "', '" + class_y + "')");

  LabeledPointSet out;
  out.x_points.dim = out.y_points.dim = feat_idx.size();
  for (int cls = 0; cls < 2; ++cls) {
    auto& all = feats[cls];
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) order[i] = i;
    if (spec.max_rows_per_class > 0 && all.size() > spec.max_rows_per_class) {
      rng64 g = make_rng(sub_seed(spec.seed, 0x5ab5,
                                  static_cast<std::uint64_t>(cls)));
      order = subsample_indices(all.size(), spec.max_rows_per_class, g);
    }
    PointCloud& dst = cls == 0 ? out.x_points : out.y_points;
    dst.coords.reserve(order.size() * feat_idx.size());
    for (std::size_t i : order)
      dst.coords.insert(dst.coords.end(), all[i].begin(), all[i].end());
  }

  apply_normalize(out, spec.normalize);
  if (spec.jitter > 0.0) {
    rng64 g = make_rng(sub_seed(spec.seed, 0x7177));
    for (double& v : out.x_points.coords)
      v += spec.jitter * (2.0 * uniform01(g) - 1.0);
    for (double& v : out.y_points.coords)
      v += spec.jitter * (2.0 * uniform01(g) - 1.0);
  }
  out.validate();
  return out;
}

std::string labeled_to_csv(const LabeledPointSet& sample) {
  std::string out = "label";
  for (std::size_t k = 0; k < sample.dim(); ++k)
    out += ",f" + std::to_string(k + 1);
  out += "\n";
  char buf[40];
  auto emit = [&](const PointCloud& cloud, const char* label) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      out += label;
      for (std::size_t k = 0; k < cloud.dim; ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", cloud.point(i)[k]);
        out += ',';
        out += buf;
      }
      out += "\n";
    }
  };
  emit(sample.x_points, "0");
  emit(sample.y_points, "1");
  return out;
}

void save_labeled_csv(const LabeledPointSet& sample, const std::string& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf)
    throw std::runtime_error("save_labeled_csv: cannot write " + path);
  outf << labeled_to_csv(sample);
  if (!outf)
    throw std::runtime_error("save_labeled_csv: write failed for " + path);
}

std::vector<DivergenceEstimate> feature_sweep(const LabeledPointSet& sample,
                                              std::size_t dims) {
  sample.validate();
  if (dims < 1 || dims > sample.dim())
    throw std::invalid_argument("feature_sweep: dims must lie in 1..dim");
  std::vector<DivergenceEstimate> out;
  out.reserve(dims);
  for (std::size_t k = 1; k <= dims; ++k) {
    LabeledPointSet sub;
    sub.x_points.dim = sub.y_points.dim = k;
    for (int cls = 0; cls < 2; ++cls) {
      const PointCloud& src = cls == 0 ? sample.x_points : sample.y_points;
      PointCloud& dst = cls == 0 ? sub.x_points : sub.y_points;
      dst.coords.reserve(src.size() * k);
      for (std::size_t i = 0; i < src.size(); ++i)
        dst.coords.insert(dst.coords.end(), src.point(i), src.point(i) + k);
    }
    out.push_back(estimate_divergence(sub));
  }
  return out;
}

}  // namespace hpdiv

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hpdiv/estimator.hpp"

namespace hpdiv {

enum class Normalize { none, unit_cube, z_score };

struct DatasetSpec {
  std::string path;
  // Column holding the class label: a header name, or a 0-based index given
  // as digits. Names require a header row.
  std::string label_column = "label";
  // Feature columns by header name or index; empty means every non-label
  // column in file order.
  std::vector<std::string> feature_columns;
  // The two label values mapped to (X, Y). Empty strings mean "take the two
  // distinct labels in order of first appearance".
  std::string class_x, class_y;
  std::size_t max_rows_per_class = 0;  // 0 keeps everything
  Normalize normalize = Normalize::none;
  std::uint64_t seed = 1;
  double jitter = 0.0;  // uniform(-a, a) noise after normalization; 0 = off
  char delimiter = 0;   // 0 auto-detects among comma, semicolon, tab
  std::optional<bool> has_header;  // unset = auto-detect
};

// Parses an RFC-4180-style delimited file (quoted fields, embedded
// delimiters and newlines honored) into the two selected classes, with
// seeded subsampling when a class exceeds max_rows_per_class.
LabeledPointSet load_labeled_csv(const DatasetSpec& spec);

// label,feature... rows with 17 significant digits; class X writes label 0,
// class Y label 1. Reloading with class_pair ("0","1") reproduces the set
// exactly.
std::string labeled_to_csv(const LabeledPointSet& sample);
void save_labeled_csv(const LabeledPointSet& sample, const std::string& path);

// Divergence re-estimated on the first k features for k = 1..dims.
std::vector<DivergenceEstimate> feature_sweep(const LabeledPointSet& sample,
                                              std::size_t dims);

}  // namespace hpdiv

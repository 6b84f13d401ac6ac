#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qspp {

/// A point set in R^d with optional ground-truth labels.
/// Immutable after construction; rows are stored contiguously.
struct Dataset {
    std::vector<double> points;  // row-major, n*d
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<int> true_labels;           // empty when no labels were loaded
    std::vector<std::string> label_names;   // dense id -> raw label text

    bool has_labels() const { return !true_labels.empty(); }
    const double* row(std::size_t i) const { return points.data() + i * d; }
};

enum class HeaderMode { detect, yes, no };

struct CsvOptions {
    char delimiter = ',';
    std::optional<int> label_column;  // negative counts back from the last column
    HeaderMode header = HeaderMode::detect;
};

/// Parse an RFC-4180-style CSV into a Dataset. The label column, when
/// selected, is removed from the features and mapped to dense integer ids
/// in first-appearance order. Throws std::runtime_error with the offending
/// row/column on parse failures, ragged rows, or non-finite values.
Dataset load_csv(const std::string& path, const CsvOptions& opts = {});

/// Write features (and the label column, when present) back out as CSV.
void save_csv(const Dataset& ds, const std::string& path, int precision = 17);

/// Check that k is usable with this dataset: 2 <= k <= n and no point has
/// k or more exact copies (which would force r_k = 0).
void validate(const Dataset& ds, std::size_t k);

/// Per-feature z-score copy. Constant features are centered to 0.
Dataset standardized(const Dataset& ds);

}  // namespace qspp

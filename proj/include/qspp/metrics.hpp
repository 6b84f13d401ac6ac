#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qspp {

/// Dense contingency table between two label vectors. Labels are remapped to
/// consecutive ids in first-appearance order; counts are exact integers.
struct ContingencyTable {
    std::size_t n = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> counts;    // rows x cols, row-major
    std::vector<std::int64_t> row_sums;  // size rows
    std::vector<std::int64_t> col_sums;  // size cols

    std::int64_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }

    static ContingencyTable from_labels(const std::vector<int>& a, const std::vector<int>& b);
};

/// Adjusted Rand index in [-0.5, 1]; 1 for identical partitions (including
/// the degenerate case where the expected index equals the maximum index).
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

/// Adjusted mutual information with arithmetic-mean normalization and the
/// exact hypergeometric expected MI. 1 when both partitions are the single
/// all-points cluster; ~0 when the denominator degenerates otherwise.
double adjusted_mutual_info(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace qspp

#include "qspp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qspp {
namespace {

// One logical CSV record. Quoted fields may contain the delimiter, doubled
// quotes, and embedded newlines (the caller feeds additional lines until the
// record closes).
bool parse_record(std::istream& in, char delimiter, std::vector<std::string>& fields) {
    fields.clear();
    std::string line;
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::string field;
    bool in_quotes = false;
    std::size_t pos = 0;
    while (true) {
        if (pos == line.size()) {
            if (!in_quotes) break;
            // Quoted field continues past the line break.
            if (!std::getline(in, line)) throw std::runtime_error("unterminated quoted field");
            if (!line.empty() && line.back() == '\r') line.pop_back();
            field.push_back('\n');
            pos = 0;
            continue;
        }
        char c = line[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < line.size() && line[pos + 1] == '"') {
                    field.push_back('"');
                    ++pos;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
            ++pos;
            continue;
        } else {
            field.push_back(c);
        }
        ++pos;
    }
    fields.push_back(std::move(field));
    return true;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& raw, double& out) {
    std::string s = trimmed(raw);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec == std::errc() && ptr == last) return true;
    // from_chars rejects forms strtod accepts (leading '+', "1e5" variants on
    // some libcs); fall back for those.
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    while (parse_record(in, opts.delimiter, fields)) {
        if (fields.size() == 1 && trimmed(fields[0]).empty()) continue;  // blank line
        records.push_back(fields);
    }
    if (records.empty()) throw std::runtime_error("empty file: " + path);

    const std::size_t width = records[0].size();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != width) {
            throw std::runtime_error("ragged row " + std::to_string(r + 1) + " in " + path +
                                     ": expected " + std::to_string(width) + " fields, got " +
                                     std::to_string(records[r].size()));
        }
    }

    bool skip_first = false;
    switch (opts.header) {
        case HeaderMode::yes:
            skip_first = true;
            break;
        case HeaderMode::no:
            skip_first = false;
            break;
        case HeaderMode::detect: {
            // Header iff the first record has a field that does not parse as a
            // number while the second record's same field does.
            if (records.size() >= 2) {
                for (std::size_t c = 0; c < width; ++c) {
                    double v;
                    if (!parse_double(records[0][c], v) && parse_double(records[1][c], v)) {
                        skip_first = true;
                        break;
                    }
                }
            }
            break;
        }
    }

    const std::size_t first_row = skip_first ? 1 : 0;
    const std::size_t n = records.size() - first_row;
    if (n == 0) throw std::runtime_error("no data rows in " + path);

    int label_col = -1;
    if (opts.label_column) {
        int c = *opts.label_column;
        if (c < 0) c += static_cast<int>(width);
        if (c < 0 || c >= static_cast<int>(width)) {
            throw std::runtime_error("label column " + std::to_string(*opts.label_column) +
                                     " out of range for " + std::to_string(width) + " columns");
        }
        label_col = c;
    }

    Dataset ds;
    ds.n = n;
    ds.d = width - (label_col >= 0 ? 1 : 0);
    if (ds.d == 0) throw std::runtime_error("no feature columns in " + path);
    ds.points.resize(ds.n * ds.d);

    std::unordered_map<std::string, int> label_ids;
    if (label_col >= 0) ds.true_labels.resize(ds.n);

    for (std::size_t r = 0; r < n; ++r) {
        const auto& rec = records[first_row + r];
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (static_cast<int>(c) == label_col) {
                std::string name = trimmed(rec[c]);
                auto [it, inserted] = label_ids.emplace(name, static_cast<int>(label_ids.size()));
                if (inserted) ds.label_names.push_back(name);
                ds.true_labels[r] = it->second;
                continue;
            }
            double v;
            if (!parse_double(rec[c], v)) {
                throw std::runtime_error("row " + std::to_string(first_row + r + 1) + ", column " +
                                         std::to_string(c + 1) + " of " + path +
                                         " is not numeric: \"" + rec[c] + "\"");
            }
            if (!std::isfinite(v)) {
                throw std::runtime_error("row " + std::to_string(first_row + r + 1) + ", column " +
                                         std::to_string(c + 1) + " of " + path + " is not finite");
            }
            ds.points[r * ds.d + out_c] = v;
            ++out_c;
        }
    }
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path, int precision) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << std::setprecision(precision);
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t c = 0; c < ds.d; ++c) {
            if (c) out << ',';
            out << ds.points[i * ds.d + c];
        }
        if (ds.has_labels()) {
            int lab = ds.true_labels[i];
            out << ',';
            if (lab >= 0 && lab < static_cast<int>(ds.label_names.size()))
                out << ds.label_names[lab];
            else
                out << lab;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void validate(const Dataset& ds, std::size_t k) {
    if (ds.n == 0 || ds.d == 0) throw std::invalid_argument("dataset is empty");
    if (ds.points.size() != ds.n * ds.d) throw std::invalid_argument("dataset shape mismatch");
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (k > ds.n) {
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the number of points " +
                                    std::to_string(ds.n));
    }
    // A point with k or more exact copies has r_k = 0 and therefore no finite
    // density. Count duplicates via a sorted view of row indices.
    std::vector<std::size_t> order(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) order[i] = i;
    const std::size_t d = ds.d;
    auto row_less = [&](std::size_t a, std::size_t b) {
        const double* pa = ds.row(a);
        const double* pb = ds.row(b);
        return std::lexicographical_compare(pa, pa + d, pb, pb + d);
    };
    auto row_eq = [&](std::size_t a, std::size_t b) {
        return std::equal(ds.row(a), ds.row(a) + d, ds.row(b));
    };
    std::sort(order.begin(), order.end(), row_less);
    std::size_t run = 1;
    for (std::size_t i = 1; i <= ds.n; ++i) {
        if (i < ds.n && row_eq(order[i - 1], order[i])) {
            ++run;
            continue;
        }
        if (run >= k) {
            throw std::invalid_argument(
                "point " + std::to_string(order[i - run]) + " has " + std::to_string(run) +
                " exact copies, so its k-th neighbor distance is zero for k = " +
                std::to_string(k));
        }
        run = 1;
    }
}

Dataset standardized(const Dataset& ds) {
    Dataset out = ds;
    for (std::size_t c = 0; c < ds.d; ++c) {
        double mean = 0;
        for (std::size_t i = 0; i < ds.n; ++i) mean += ds.points[i * ds.d + c];
        mean /= static_cast<double>(ds.n);
        double var = 0;
        for (std::size_t i = 0; i < ds.n; ++i) {
            double dv = ds.points[i * ds.d + c] - mean;
            var += dv * dv;
        }
        var /= static_cast<double>(ds.n);
        double sd = std::sqrt(var);
        if (sd == 0) sd = 1;  // constant column: centered only
        for (std::size_t i = 0; i < ds.n; ++i) {
            out.points[i * ds.d + c] = (ds.points[i * ds.d + c] - mean) / sd;
        }
    }
    return out;
}

}  // namespace qspp

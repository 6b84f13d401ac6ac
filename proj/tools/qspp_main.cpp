#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "qspp/metrics.hpp"
#include "qspp/pipeline.hpp"
#include "qspp/segmentation.hpp"

namespace {

struct CommonOpts {
    std::string input;
    std::size_t k = 20;
    double beta = 0.3;
    std::optional<int> label_col;
    std::string delimiter = ",";
    int header = -1;  // -1 detect, 0 force off, 1 force on
    bool standardize = false;
    int threads = 0;
    long seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, double default_beta) {
    o.beta = default_beta;
    cmd->add_option("input", o.input, "input CSV file")->required();
    cmd->add_option("-k,--k", o.k, "number of nearest neighbors");
    cmd->add_option("-b,--beta", o.beta, "density fluctuation parameter in [0,1)");
    cmd->add_option("--label-col", o.label_col,
                    "column holding ground-truth labels (negative counts from the end)");
    cmd->add_option("--delimiter", o.delimiter, "field delimiter, a single character");
    cmd->add_flag_callback("--header", [&o] { o.header = 1; }, "treat the first row as a header");
    cmd->add_flag_callback("--no-header", [&o] { o.header = 0; },
                           "treat the first row as data");
    cmd->add_flag("--standardize", o.standardize, "z-score each feature column before clustering");
    cmd->add_option("--threads", o.threads, "worker thread count (0 = library default)");
    cmd->add_option("--seed", o.seed, "seed for synthetic-data subcommands (reserved)");
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

qspp::CsvOptions csv_options(const CommonOpts& o) {
    qspp::CsvOptions opts;
    if (o.delimiter.size() != 1) throw CLI::ValidationError("--delimiter must be one character");
    opts.delimiter = o.delimiter[0];
    opts.label_column = o.label_col;
    opts.header = o.header < 0 ? qspp::HeaderMode::detect
                               : (o.header == 0 ? qspp::HeaderMode::no : qspp::HeaderMode::yes);
    return opts;
}

qspp::Dataset load_input(const CommonOpts& o) {
    qspp::Dataset ds = qspp::load_csv(o.input, csv_options(o));
    if (o.standardize) ds = qspp::standardized(ds);
    return ds;
}

void write_labels(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (int lab : labels) out << lab << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// One label token per line; arbitrary strings are remapped to dense ids in
/// first-appearance order, which both scores are invariant to.
std::vector<int> read_label_file(const std::string& path, bool skip_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<int> labels;
    std::unordered_map<std::string, int> ids;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t");
        std::string tok = line.substr(b, e - b + 1);
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        auto [it, inserted] = ids.emplace(tok, static_cast<int>(ids.size()));
        labels.push_back(it->second);
    }
    if (labels.empty()) throw std::runtime_error("no labels in " + path);
    return labels;
}

/// Accepts comma-separated entries, each either one integer or an inclusive
/// range "lo:hi[:step]".
std::vector<std::size_t> parse_k_list(const std::string& expr) {
    std::vector<std::size_t> ks;
    std::stringstream ss(expr);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (piece.empty()) continue;
        long lo = 0, hi = 0, step = 1;
        const auto c1 = piece.find(':');
        if (c1 == std::string::npos) {
            lo = hi = std::stol(piece);
        } else {
            lo = std::stol(piece.substr(0, c1));
            const auto c2 = piece.find(':', c1 + 1);
            if (c2 == std::string::npos) {
                hi = std::stol(piece.substr(c1 + 1));
            } else {
                hi = std::stol(piece.substr(c1 + 1, c2 - c1 - 1));
                step = std::stol(piece.substr(c2 + 1));
            }
        }
        if (lo <= 0 || hi < lo || step <= 0) throw std::runtime_error("bad k list: " + expr);
        for (long v = lo; v <= hi; v += step) ks.push_back(static_cast<std::size_t>(v));
    }
    if (ks.empty()) throw std::runtime_error("empty k list: " + expr);
    return ks;
}

int cmd_cluster(const CommonOpts& o, const std::string& out_path, const std::string& cores_path,
                const std::string& parents_path, const std::string& density_path) {
    apply_threads(o.threads);
    const qspp::Dataset ds = load_input(o);
    qspp::PipelineOptions popts;
    popts.k = o.k;
    popts.beta = o.beta;
    const qspp::PipelineResult res = qspp::run_pipeline(ds, popts);

    write_labels(res.clustering.labels, out_path);
    write_text(qspp::cores_to_json(res.cores) + "\n", cores_path);
    if (!parents_path.empty()) {
        std::ostringstream body;
        body << "index,parent\n";
        for (std::size_t i = 0; i < ds.n; ++i) {
            body << i << ',' << res.clustering.parent[i] << '\n';
        }
        write_text(body.str(), parents_path);
    }
    if (!density_path.empty()) {
        std::ostringstream body;
        body << "index,r_k,f_k\n";
        body.precision(17);
        for (std::size_t i = 0; i < ds.n; ++i) {
            body << i << ',' << res.density.r[i] << ',' << res.density.f[i] << '\n';
        }
        write_text(body.str(), density_path);
    }

    std::printf("n=%zu d=%zu k=%zu beta=%g cores=%zu time_s=%.3f\n", ds.n, ds.d, o.k, o.beta,
                res.cores.size(), res.timings.total_s);
    if (ds.has_labels()) {
        std::printf("ARI=%.6f AMI=%.6f\n",
                    qspp::adjusted_rand_index(res.clustering.labels, ds.true_labels),
                    qspp::adjusted_mutual_info(res.clustering.labels, ds.true_labels));
    }
    return 0;
}

int cmd_score(const std::string& pred_path, const std::string& truth_path, bool skip_header) {
    const std::vector<int> pred = read_label_file(pred_path, skip_header);
    const std::vector<int> truth = read_label_file(truth_path, skip_header);
    std::printf("ARI=%.6f AMI=%.6f\n", qspp::adjusted_rand_index(pred, truth),
                qspp::adjusted_mutual_info(pred, truth));
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& ks_expr, const std::string& out_path) {
    apply_threads(o.threads);
    const qspp::Dataset ds = load_input(o);
    if (!ds.has_labels()) {
        throw std::runtime_error("sweep needs ground-truth labels; pass --label-col");
    }
    const std::vector<std::size_t> ks = parse_k_list(ks_expr);

    std::ostringstream table;
    table << "k,n_cores,ari,ami,error\n";
    for (std::size_t k : ks) {
        qspp::PipelineOptions popts;
        popts.k = k;
        popts.beta = o.beta;
        try {
            const qspp::PipelineResult res = qspp::run_pipeline(ds, popts);
            char row[128];
            std::snprintf(row, sizeof row, "%zu,%zu,%.6f,%.6f,\n", k, res.cores.size(),
                          qspp::adjusted_rand_index(res.clustering.labels, ds.true_labels),
                          qspp::adjusted_mutual_info(res.clustering.labels, ds.true_labels));
            table << row;
        } catch (const std::exception& e) {
            std::string msg = e.what();
            for (char& c : msg) {
                if (c == ',' || c == '\n') c = ';';
            }
            table << k << ",,,," << msg << '\n';
        }
    }
    if (out_path.empty()) {
        std::cout << table.str();
    } else {
        write_text(table.str(), out_path);
    }
    return 0;
}

int cmd_segment(const CommonOpts& o, double spatial_scale, std::size_t max_dim,
                const std::string& out_path, const std::string& labels_path) {
    apply_threads(o.threads);
    const qspp::Image img = qspp::read_image(o.input);
    qspp::SegmentationOptions sopts;
    sopts.k = o.k;
    sopts.beta = o.beta;
    sopts.spatial_scale = spatial_scale;
    sopts.max_dim = max_dim;
    const qspp::SegmentationResult res = qspp::segment(img, sopts);

    qspp::write_png(res.rendered, out_path);
    if (!labels_path.empty()) write_labels(res.label_map, labels_path);
    std::printf("height=%zu width=%zu k=%zu beta=%g segments=%zu\n", res.height, res.width, o.k,
                o.beta, res.n_segments);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quickshift++ density-based clustering"};
    app.require_subcommand(1);

    CommonOpts cluster_o, sweep_o, segment_o;
    std::string cluster_out = "labels.csv";
    std::string cluster_cores = "cores.json";
    std::string cluster_parents, cluster_density;
    auto* cluster = app.add_subcommand("cluster", "cluster a CSV dataset");
    add_common(cluster, cluster_o, 0.3);
    cluster->add_option("-o,--out", cluster_out, "labels output path");
    cluster->add_option("--cores-out", cluster_cores, "cores JSON output path");
    cluster->add_option("--parents-out", cluster_parents, "parent-forest CSV output path");
    cluster->add_option("--density-out", cluster_density, "per-point r_k/f_k CSV output path");

    std::string score_pred, score_truth;
    bool score_header = false;
    auto* score = app.add_subcommand("score", "score one label file against another");
    score->add_option("pred", score_pred, "predicted labels, one per line")->required();
    score->add_option("truth", score_truth, "ground-truth labels, one per line")->required();
    score->add_flag("--header", score_header, "skip the first line of both files");

    std::string sweep_ks = "5:60:5";
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run the pipeline across several k values");
    add_common(sweep, sweep_o, 0.3);
    sweep->add_option("--ks", sweep_ks, "k values: comma list and/or lo:hi[:step] ranges");
    sweep->add_option("-o,--out", sweep_out, "score table output path (default stdout)");

    double seg_scale = 1.0;
    std::size_t seg_max_dim = 0;
    std::string seg_out = "segmented.png";
    std::string seg_labels = "segment_labels.csv";
    auto* segment = app.add_subcommand("segment", "segment a PNG/PPM image");
    add_common(segment, segment_o, 0.9);
    segment_o.k = 50;
    segment->add_option("--spatial-scale", seg_scale, "weight on pixel coordinates");
    segment->add_option("--max-dim", seg_max_dim,
                        "downscale so max(height,width) <= this before clustering (0 = off)");
    segment->add_option("-o,--out", seg_out, "rendered PNG output path");
    segment->add_option("--labels-out", seg_labels, "per-pixel label CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cluster->parsed()) {
            return cmd_cluster(cluster_o, cluster_out, cluster_cores, cluster_parents,
                               cluster_density);
        }
        if (score->parsed()) return cmd_score(score_pred, score_truth, score_header);
        if (sweep->parsed()) return cmd_sweep(sweep_o, sweep_ks, sweep_out);
        if (segment->parsed()) {
            return cmd_segment(segment_o, seg_scale, seg_max_dim, seg_out, seg_labels);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

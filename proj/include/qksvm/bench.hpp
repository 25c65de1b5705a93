// Copyright 2026 The qksvm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QKSVM_BENCH_HPP
#define QKSVM_BENCH_HPP

/**
 * End-to-end experiment harness: CSV loading with one-hot expansion and
 * missing-row dropping, the preprocessing chain (min-max -> PCA -> min-max),
 * fidelity-kernel SVM training, evaluation, and a multi-map comparison
 * suite with text/JSON/CSV reports.
 *
 * Everything here works in double precision; the templated core modules
 * stay scalar-generic.
 */

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qksvm/common.hpp"
#include "qksvm/error.hpp"
#include "qksvm/feature_map.hpp"
#include "qksvm/kernel.hpp"
#include "qksvm/metrics.hpp"
#include "qksvm/preprocess.hpp"
#include "qksvm/svm.hpp"

namespace qksvm {

// ---------------------------------------------------------------------------
// Configuration

enum class KernelMode { EXACT, SAMPLED };

inline const char *kernel_mode_name(KernelMode mode) {
    return mode == KernelMode::EXACT ? "exact" : "sampled";
}

inline KernelMode kernel_mode_from_name(const std::string &name) {
    if (name == "exact") {
        return KernelMode::EXACT;
    }
    if (name == "sampled") {
        return KernelMode::SAMPLED;
    }
    throw ConfigError("unknown kernel mode: " + name);
}

struct ExperimentConfig {
    std::string dataset_path;
    std::string label_column;
    /// Label cell value mapped to +1; everything else becomes -1.
    std::string positive_label;
    std::vector<std::string> categorical_columns;
    FeatureMapSpec<double> feature_map;
    double C = 1.0;
    double test_fraction = 0.2;
    std::uint64_t seed = 42;
    KernelMode kernel_mode = KernelMode::EXACT;
    int shots = 1000;
    Eigen::Index pca_components = 5;
    /// Fit the scaling/PCA chain on the full dataset before splitting
    /// instead of on the training partition only.
    bool scale_before_split = false;
    double smo_tolerance = 1e-3;
    int smo_max_passes = 5;
};

inline void validate_config(const ExperimentConfig &config) {
    if (config.dataset_path.empty()) {
        throw ConfigError("config: dataset_path is empty");
    }
    if (config.label_column.empty()) {
        throw ConfigError("config: label_column is empty");
    }
    detail::validate_spec(config.feature_map);
    if (config.C <= 0.0) {
        throw ConfigError("config: C must be positive");
    }
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
        throw ConfigError("config: test_fraction must lie in (0,1)");
    }
    if (config.kernel_mode == KernelMode::SAMPLED && config.shots < 1) {
        throw ConfigError("config: shots must be >= 1 in sampled mode");
    }
    if (config.pca_components < 1) {
        throw ConfigError("config: pca_components must be >= 1");
    }
    if (config.smo_tolerance <= 0.0) {
        throw ConfigError("config: smo_tolerance must be positive");
    }
    if (config.smo_max_passes < 1) {
        throw ConfigError("config: smo_max_passes must be >= 1");
    }
}

inline nlohmann::json config_to_json(const ExperimentConfig &config) {
    nlohmann::json doc;
    doc["dataset_path"] = config.dataset_path;
    doc["label_column"] = config.label_column;
    doc["positive_label"] = config.positive_label;
    doc["categorical_columns"] = config.categorical_columns;
    doc["feature_map"] = {
        {"family", family_name(config.feature_map.family)},
        {"repetitions", config.feature_map.repetitions},
        {"angle_scale", config.feature_map.angle_scale},
    };
    doc["C"] = config.C;
    doc["test_fraction"] = config.test_fraction;
    doc["seed"] = config.seed;
    doc["kernel_mode"] = kernel_mode_name(config.kernel_mode);
    doc["shots"] = config.shots;
    doc["pca_components"] = config.pca_components;
    doc["scale_before_split"] = config.scale_before_split;
    doc["smo_tolerance"] = config.smo_tolerance;
    doc["smo_max_passes"] = config.smo_max_passes;
    return doc;
}

inline ExperimentConfig config_from_json(const nlohmann::json &doc) {
    ExperimentConfig config;
    try {
        config.dataset_path = doc.value("dataset_path", config.dataset_path);
        config.label_column = doc.value("label_column", config.label_column);
        config.positive_label =
            doc.value("positive_label", config.positive_label);
        config.categorical_columns = doc.value("categorical_columns",
                                               config.categorical_columns);
        if (doc.contains("feature_map")) {
            const auto &fm = doc.at("feature_map");
            if (fm.contains("family")) {
                config.feature_map.family =
                    family_from_name(fm.at("family").get<std::string>());
            }
            config.feature_map.repetitions =
                fm.value("repetitions", config.feature_map.repetitions);
            config.feature_map.angle_scale =
                fm.value("angle_scale", config.feature_map.angle_scale);
        }
        config.C = doc.value("C", config.C);
        config.test_fraction =
            doc.value("test_fraction", config.test_fraction);
        config.seed = doc.value("seed", config.seed);
        if (doc.contains("kernel_mode")) {
            config.kernel_mode = kernel_mode_from_name(
                doc.at("kernel_mode").get<std::string>());
        }
        config.shots = doc.value("shots", config.shots);
        config.pca_components =
            doc.value("pca_components", config.pca_components);
        config.scale_before_split =
            doc.value("scale_before_split", config.scale_before_split);
        config.smo_tolerance =
            doc.value("smo_tolerance", config.smo_tolerance);
        config.smo_max_passes =
            doc.value("smo_max_passes", config.smo_max_passes);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return config;
}

// ---------------------------------------------------------------------------
// CSV loading

struct LoadedCsv {
    LabeledDataset<double> dataset;
    /// Post-expansion column names; one-hot columns read "column=value".
    std::vector<std::string> feature_names;
    /// Rows removed because a cell was "?" or empty.
    long dropped_rows = 0;
};

namespace detail {

inline std::string trim_cell(const std::string &raw) {
    const auto begin = raw.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = raw.find_last_not_of(" \t\r\n");
    return raw.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        cells.push_back(trim_cell(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.push_back("");
    }
    return cells;
}

inline double parse_numeric_cell(const std::string &cell,
                                 const std::string &column,
                                 std::size_t line_number) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &consumed);
    } catch (const std::exception &) {
        consumed = 0;
    }
    if (consumed != cell.size()) {
        throw IoError("load_csv: cannot parse '" + cell +
                      "' in column '" + column + "' at line " +
                      std::to_string(line_number));
    }
    return value;
}

} // namespace detail

/**
 * Reads a comma-separated file with a header row. Listed categorical
 * columns are one-hot expanded in place; all other non-label columns must
 * parse as real numbers. Rows containing "?" or empty cells are dropped
 * and counted. Label cells equal to `positive_label` map to +1, all
 * others to -1.
 */
inline LoadedCsv load_csv(const std::string &path,
                          const std::string &label_column,
                          const std::string &positive_label,
                          const std::vector<std::string>
                              &categorical_columns = {}) {
    std::ifstream file(path);
    if (!file) {
        throw IoError("load_csv: cannot open " + path);
    }

    std::string line;
    if (!std::getline(file, line)) {
        throw IoError("load_csv: " + path + " is empty");
    }
    const std::vector<std::string> header = detail::split_line(line);

    Eigen::Index label_index = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == label_column) {
            label_index = static_cast<Eigen::Index>(j);
        }
    }
    if (label_index < 0) {
        throw ConfigError("load_csv: label column '" + label_column +
                          "' not found in " + path);
    }
    for (const auto &name : categorical_columns) {
        if (name == label_column) {
            throw ConfigError(
                "load_csv: label column cannot be categorical: " + name);
        }
        if (std::find(header.begin(), header.end(), name) == header.end()) {
            throw ConfigError("load_csv: categorical column '" + name +
                              "' not found in " + path);
        }
    }

    std::vector<std::vector<std::string>> rows;
    long dropped = 0;
    std::size_t line_number = 1;
    while (std::getline(file, line)) {
        ++line_number;
        if (detail::trim_cell(line).empty()) {
            continue;
        }
        std::vector<std::string> cells = detail::split_line(line);
        if (cells.size() != header.size()) {
            throw IoError("load_csv: line " + std::to_string(line_number) +
                          " has " + std::to_string(cells.size()) +
                          " fields, expected " +
                          std::to_string(header.size()));
        }
        const bool missing =
            std::any_of(cells.begin(), cells.end(), [](const auto &c) {
                return c.empty() || c == "?";
            });
        if (missing) {
            ++dropped;
            continue;
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) {
        throw IoError("load_csv: no usable rows in " + path);
    }

    const auto n = static_cast<Eigen::Index>(rows.size());
    LoadedCsv out;
    out.dropped_rows = dropped;

    // Assemble feature columns in header order, expanding categoricals.
    std::vector<VectorX<double>> columns;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (static_cast<Eigen::Index>(j) == label_index) {
            continue;
        }
        const bool categorical =
            std::find(categorical_columns.begin(),
                      categorical_columns.end(),
                      header[j]) != categorical_columns.end();
        if (categorical) {
            std::vector<std::string> values(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                values[i] = rows[i][j];
            }
            const auto encoded = one_hot(values);
            for (Eigen::Index c = 0; c < encoded.columns.cols(); ++c) {
                columns.push_back(encoded.columns.col(c));
                out.feature_names.push_back(
                    header[j] + "=" +
                    encoded.categories[static_cast<std::size_t>(c)]);
            }
        } else {
            VectorX<double> column(n);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                column[static_cast<Eigen::Index>(i)] =
                    detail::parse_numeric_cell(rows[i][j], header[j], i + 2);
            }
            columns.push_back(std::move(column));
            out.feature_names.push_back(header[j]);
        }
    }

    out.dataset.features.resize(n, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.dataset.features.col(static_cast<Eigen::Index>(c)) = columns[c];
    }
    out.dataset.labels.resize(n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.dataset.labels[static_cast<Eigen::Index>(i)] =
            rows[i][static_cast<std::size_t>(label_index)] == positive_label
                ? 1
                : -1;
    }
    const auto n_pos = (out.dataset.labels.array() == 1).count();
    if (n_pos == 0 || n_pos == n) {
        throw DegenerateInputError(
            "load_csv: labels in " + path + " form a single class (check "
            "positive_label='" + positive_label + "')");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Preprocessing chain

struct PreparedData {
    MatrixX<double> train_features;
    MatrixX<double> test_features;
    VectorXi train_labels;
    VectorXi test_labels;
};

/**
 * Splits, then runs min-max -> PCA(k) -> min-max. With
 * `scale_before_split` the chain is fitted on the full dataset before the
 * split (leaking test statistics into the transforms); by default it is
 * fitted on the training partition only.
 */
inline PreparedData prepare_features(const LabeledDataset<double> &dataset,
                                     double test_fraction,
                                     std::uint64_t seed,
                                     Eigen::Index pca_components,
                                     bool scale_before_split = false) {
    const auto chain_fit = [pca_components](const MatrixX<double> &fit_data) {
        const auto scaler = minmax_fit(fit_data);
        const MatrixX<double> scaled = minmax_apply(scaler, fit_data);
        const auto pca = pca_fit(scaled, pca_components);
        const MatrixX<double> projected = pca_apply(pca, scaled);
        const auto post = minmax_fit(projected);
        return std::make_tuple(scaler, pca, post);
    };
    const auto chain_apply = [](const auto &chain,
                                const MatrixX<double> &data) {
        const auto &[scaler, pca, post] = chain;
        return minmax_apply(post, pca_apply(pca, minmax_apply(scaler, data)));
    };

    PreparedData prepared;
    if (scale_before_split) {
        const auto chain = chain_fit(dataset.features);
        LabeledDataset<double> transformed;
        transformed.features = chain_apply(chain, dataset.features);
        transformed.labels = dataset.labels;
        auto [train, test] = stratified_split(transformed, test_fraction,
                                              seed);
        prepared.train_features = std::move(train.features);
        prepared.test_features = std::move(test.features);
        prepared.train_labels = std::move(train.labels);
        prepared.test_labels = std::move(test.labels);
    } else {
        auto [train, test] = stratified_split(dataset, test_fraction, seed);
        const auto chain = chain_fit(train.features);
        prepared.train_features = chain_apply(chain, train.features);
        prepared.test_features = chain_apply(chain, test.features);
        prepared.train_labels = std::move(train.labels);
        prepared.test_labels = std::move(test.labels);
    }
    return prepared;
}

// ---------------------------------------------------------------------------
// Experiment runner

struct ExperimentReport {
    std::string feature_map;
    int repetitions = 1;
    double angle_scale = 0.0;
    std::string kernel_mode;
    int shots = 0;
    double accuracy = 0.0;
    double auroc = 0.0;
    double precision_pos = 0.0;
    double recall_pos = 0.0;
    double f1_pos = 0.0;
    double precision_neg = 0.0;
    double recall_neg = 0.0;
    double f1_neg = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;
    Eigen::Index train_size = 0;
    Eigen::Index test_size = 0;
    long dropped_rows = 0;
    double kernel_seconds = 0.0;
    double train_predict_seconds = 0.0;
};

/// Intermediate products of a run, exposed for kernel dumps and testing.
struct RunArtifacts {
    PreparedData prepared;
    KernelMatrix<double> train_kernel;
    KernelMatrix<double> cross_kernel;
    SvmModel<double> model;
    VectorX<double> decisions;
    VectorXi predictions;
};

inline nlohmann::json report_to_json(const ExperimentReport &report) {
    nlohmann::json doc;
    doc["feature_map"] = report.feature_map;
    doc["repetitions"] = report.repetitions;
    doc["angle_scale"] = report.angle_scale;
    doc["kernel_mode"] = report.kernel_mode;
    doc["shots"] = report.shots;
    doc["accuracy"] = report.accuracy;
    doc["auroc"] = report.auroc;
    doc["precision_pos"] = report.precision_pos;
    doc["recall_pos"] = report.recall_pos;
    doc["f1_pos"] = report.f1_pos;
    doc["precision_neg"] = report.precision_neg;
    doc["recall_neg"] = report.recall_neg;
    doc["f1_neg"] = report.f1_neg;
    doc["tp"] = report.tp;
    doc["fp"] = report.fp;
    doc["tn"] = report.tn;
    doc["fn"] = report.fn;
    doc["train_size"] = report.train_size;
    doc["test_size"] = report.test_size;
    doc["dropped_rows"] = report.dropped_rows;
    doc["kernel_seconds"] = report.kernel_seconds;
    doc["train_predict_seconds"] = report.train_predict_seconds;
    return doc;
}

/// Keys that vary run-to-run; erase them before comparing reports.
inline const std::vector<std::string> &report_timing_keys() {
    static const std::vector<std::string> keys = {"kernel_seconds",
                                                  "train_predict_seconds"};
    return keys;
}

inline ExperimentReport run_experiment(const ExperimentConfig &config,
                                       RunArtifacts *artifacts = nullptr) {
    validate_config(config);
    using clock = std::chrono::steady_clock;
    const auto seconds_since = [](clock::time_point start) {
        return std::chrono::duration<double>(clock::now() - start).count();
    };

    const LoadedCsv loaded =
        load_csv(config.dataset_path, config.label_column,
                 config.positive_label, config.categorical_columns);
    PreparedData prepared = prepare_features(
        loaded.dataset, config.test_fraction, config.seed,
        config.pca_components, config.scale_before_split);

    const auto kernel_start = clock::now();
    KernelMatrix<double> K_train;
    KernelMatrix<double> K_cross;
    if (config.kernel_mode == KernelMode::EXACT) {
        K_train = kernel_matrix(config.feature_map, prepared.train_features);
        K_cross = kernel_matrix(config.feature_map, prepared.test_features,
                                prepared.train_features);
    } else {
        const std::uint64_t train_seed = splitmix64(config.seed);
        const std::uint64_t cross_seed =
            splitmix64(config.seed + 0x9e3779b97f4a7c15ULL);
        K_train = kernel_matrix_sampled(config.feature_map,
                                        prepared.train_features,
                                        config.shots, train_seed);
        K_cross = kernel_matrix_sampled(
            config.feature_map, prepared.test_features,
            prepared.train_features, config.shots, cross_seed);
    }
    const double kernel_seconds = seconds_since(kernel_start);

    const auto train_start = clock::now();
    const SvmModel<double> model =
        train_smo(K_train, prepared.train_labels, config.C,
                  config.smo_tolerance, config.smo_max_passes, config.seed);
    const VectorX<double> decisions = decision_values(model, K_cross);
    const VectorXi predictions = predict(model, K_cross);
    const double train_predict_seconds = seconds_since(train_start);

    const ConfusionMatrix cm = confusion(prepared.test_labels, predictions);
    const MetricsSummary s = summary(cm);

    ExperimentReport report;
    report.feature_map = family_name(config.feature_map.family);
    report.repetitions = config.feature_map.repetitions;
    report.angle_scale = config.feature_map.angle_scale;
    report.kernel_mode = kernel_mode_name(config.kernel_mode);
    report.shots = config.kernel_mode == KernelMode::SAMPLED ? config.shots
                                                             : 0;
    report.accuracy = s.accuracy;
    report.auroc = auroc(prepared.test_labels, decisions);
    report.precision_pos = s.positive.precision;
    report.recall_pos = s.positive.recall;
    report.f1_pos = s.positive.f1;
    report.precision_neg = s.negative.precision;
    report.recall_neg = s.negative.recall;
    report.f1_neg = s.negative.f1;
    report.tp = cm.tp;
    report.fp = cm.fp;
    report.tn = cm.tn;
    report.fn = cm.fn;
    report.train_size = prepared.train_labels.size();
    report.test_size = prepared.test_labels.size();
    report.dropped_rows = loaded.dropped_rows;
    report.kernel_seconds = kernel_seconds;
    report.train_predict_seconds = train_predict_seconds;

    if (artifacts != nullptr) {
        artifacts->prepared = std::move(prepared);
        artifacts->train_kernel = std::move(K_train);
        artifacts->cross_kernel = std::move(K_cross);
        artifacts->model = model;
        artifacts->decisions = decisions;
        artifacts->predictions = predictions;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Suite

/// The nine feature maps compared by the benchmark; the Pauli-Z maps use
/// two repetitions, everything else one.
inline std::vector<FeatureMapSpec<double>> default_suite_maps() {
    std::vector<FeatureMapSpec<double>> maps;
    for (const auto family : kAllFamilies) {
        FeatureMapSpec<double> spec;
        spec.family = family;
        if (family == FeatureMapFamily::Z_FEATURE ||
            family == FeatureMapFamily::ZZ_FEATURE) {
            spec.repetitions = 2;
        }
        maps.push_back(spec);
    }
    return maps;
}

struct SuiteRow {
    ExperimentReport report;
    bool ok = false;
    std::string error;
};

/// Runs one experiment per map under the shared base config; failures are
/// recorded per row and the suite keeps going.
inline std::vector<SuiteRow>
run_suite(const ExperimentConfig &base,
          const std::vector<FeatureMapSpec<double>> &maps) {
    std::vector<SuiteRow> rows;
    rows.reserve(maps.size());
    for (const auto &map : maps) {
        ExperimentConfig config = base;
        config.feature_map = map;
        SuiteRow row;
        row.report.feature_map = family_name(map.family);
        row.report.repetitions = map.repetitions;
        row.report.angle_scale = map.angle_scale;
        try {
            row.report = run_experiment(config);
            row.ok = true;
        } catch (const std::exception &e) {
            row.ok = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::json suite_to_json(const std::vector<SuiteRow> &rows) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto &row : rows) {
        nlohmann::json entry;
        if (row.ok) {
            entry = report_to_json(row.report);
            entry["status"] = "ok";
        } else {
            entry["feature_map"] = row.report.feature_map;
            entry["repetitions"] = row.report.repetitions;
            entry["status"] = "error";
            entry["error"] = row.error;
        }
        doc.push_back(std::move(entry));
    }
    return doc;
}

inline std::string suite_to_csv(const std::vector<SuiteRow> &rows) {
    std::ostringstream out;
    out << "feature_map,repetitions,angle_scale,accuracy,auroc,"
        << "precision_pos,recall_pos,f1_pos,precision_neg,recall_neg,"
        << "f1_neg,tp,fp,tn,fn,train_size,test_size,dropped_rows,"
        << "kernel_seconds,train_predict_seconds,status,error\n";
    out << std::setprecision(17);
    for (const auto &row : rows) {
        const auto &r = row.report;
        out << r.feature_map << ',' << r.repetitions << ',';
        if (row.ok) {
            out << r.angle_scale << ',' << r.accuracy << ',' << r.auroc
                << ',' << r.precision_pos << ',' << r.recall_pos << ','
                << r.f1_pos << ',' << r.precision_neg << ',' << r.recall_neg
                << ',' << r.f1_neg << ',' << r.tp << ',' << r.fp << ','
                << r.tn << ',' << r.fn << ',' << r.train_size << ','
                << r.test_size << ',' << r.dropped_rows << ','
                << r.kernel_seconds << ',' << r.train_predict_seconds
                << ",ok,\n";
        } else {
            out << ",,,,,,,,,,,,,,,,,,error," << row.error << '\n';
        }
    }
    return out.str();
}

inline std::string render_table(const std::vector<SuiteRow> &rows) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "feature_map" << std::right
        << std::setw(6) << "reps" << std::setw(10) << "accuracy"
        << std::setw(8) << "auroc" << std::setw(8) << "f1(+)" << std::setw(8)
        << "f1(-)" << std::setw(10) << "kernel_s" << std::setw(9)
        << "train_s" << '\n';
    for (const auto &row : rows) {
        const auto &r = row.report;
        out << std::left << std::setw(12) << r.feature_map << std::right
            << std::setw(6) << r.repetitions;
        if (row.ok) {
            out << std::fixed << std::setprecision(4) << std::setw(10)
                << r.accuracy << std::setw(8) << r.auroc << std::setw(8)
                << r.f1_pos << std::setw(8) << r.f1_neg
                << std::setprecision(2) << std::setw(10) << r.kernel_seconds
                << std::setw(9) << r.train_predict_seconds;
            out.unsetf(std::ios_base::fixed);
            out << std::setprecision(6);
        } else {
            out << "  error: " << row.error;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace qksvm

#endif // QKSVM_BENCH_HPP

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

// Command-line front end: `qksvm run` executes one experiment, `qksvm
// suite` compares a list of feature maps under a shared configuration.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qksvm/bench.hpp"

namespace {

using namespace qksvm;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    bool dump_kernels = false;

    std::string dataset;
    std::string label_column;
    std::string positive_label;
    std::vector<std::string> categorical;
    std::string map_name;
    int repetitions = 1;
    double angle_scale = 0.0;
    double C = 1.0;
    double test_fraction = 0.2;
    std::uint64_t seed = 42;
    std::string kernel_mode;
    int shots = 1000;
    long pca_components = 5;
    bool scale_before_split = false;
    double smo_tolerance = 1e-3;
    int smo_max_passes = 5;
};

/// Registers the flags shared by `run` and `suite`; returns the option
/// handles needed to detect which flags the user actually set.
void add_common_flags(CLI::App *cmd, CliOptions &opt) {
    cmd->add_option("--config", opt.config_path,
                    "JSON config file; flags override its fields");
    cmd->add_option("--dataset", opt.dataset, "CSV dataset path");
    cmd->add_option("--label-column", opt.label_column,
                    "name of the label column");
    cmd->add_option("--positive-label", opt.positive_label,
                    "label value mapped to +1");
    cmd->add_option("--categorical", opt.categorical,
                    "categorical column names to one-hot expand");
    cmd->add_option("--C", opt.C, "SVM regularization constant");
    cmd->add_option("--test-fraction", opt.test_fraction,
                    "held-out fraction in (0,1)");
    cmd->add_option("--seed", opt.seed, "split/solver/sampling seed");
    cmd->add_option("--kernel-mode", opt.kernel_mode,
                    "'exact' or 'sampled'");
    cmd->add_option("--shots", opt.shots,
                    "measurement shots per entry in sampled mode");
    cmd->add_option("--pca", opt.pca_components,
                    "number of principal components");
    cmd->add_flag("--scale-before-split", opt.scale_before_split,
                  "fit the scaling chain before splitting");
    cmd->add_option("--smo-tol", opt.smo_tolerance,
                    "SMO KKT violation tolerance");
    cmd->add_option("--smo-max-passes", opt.smo_max_passes,
                    "non-improving sweeps before SMO stops");
    cmd->add_option("--out", opt.out_dir, "directory for report files");
    cmd->add_flag("--dump-kernels", opt.dump_kernels,
                  "also write kernel matrices as CSV");
}

ExperimentConfig build_config(const CLI::App *cmd, const CliOptions &opt) {
    ExperimentConfig config;
    if (!opt.config_path.empty()) {
        std::ifstream file(opt.config_path);
        if (!file) {
            throw IoError("cannot open config file " + opt.config_path);
        }
        nlohmann::json doc;
        try {
            file >> doc;
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError("config file " + opt.config_path + ": " +
                              e.what());
        }
        config = config_from_json(doc);
    }
    const auto set = [cmd](const std::string &flag) {
        return cmd->count(flag) > 0;
    };
    if (set("--dataset")) config.dataset_path = opt.dataset;
    if (set("--label-column")) config.label_column = opt.label_column;
    if (set("--positive-label")) config.positive_label = opt.positive_label;
    if (set("--categorical")) config.categorical_columns = opt.categorical;
    if (set("--C")) config.C = opt.C;
    if (set("--test-fraction")) config.test_fraction = opt.test_fraction;
    if (set("--seed")) config.seed = opt.seed;
    if (set("--kernel-mode")) {
        config.kernel_mode = kernel_mode_from_name(opt.kernel_mode);
    }
    if (set("--shots")) config.shots = opt.shots;
    if (set("--pca")) config.pca_components = opt.pca_components;
    if (set("--scale-before-split")) {
        config.scale_before_split = opt.scale_before_split;
    }
    if (set("--smo-tol")) config.smo_tolerance = opt.smo_tolerance;
    if (set("--smo-max-passes")) config.smo_max_passes = opt.smo_max_passes;
    return config;
}

void write_text_file(const std::filesystem::path &path,
                     const std::string &content) {
    std::ofstream file(path);
    if (!file) {
        throw IoError("cannot write " + path.string());
    }
    file << content;
}

int run_single(const CLI::App *cmd, const CliOptions &opt) {
    ExperimentConfig config = build_config(cmd, opt);
    if (cmd->count("--map") > 0) {
        config.feature_map.family = family_from_name(opt.map_name);
    }
    if (cmd->count("--reps") > 0) {
        config.feature_map.repetitions = opt.repetitions;
    }
    if (cmd->count("--angle-scale") > 0) {
        config.feature_map.angle_scale = opt.angle_scale;
    }

    RunArtifacts artifacts;
    const ExperimentReport report = run_experiment(config, &artifacts);
    const nlohmann::json doc = report_to_json(report);
    std::cout << doc.dump(2) << '\n';

    if (!opt.out_dir.empty()) {
        const std::filesystem::path dir(opt.out_dir);
        std::filesystem::create_directories(dir);
        write_text_file(dir / "report.json", doc.dump(2) + "\n");
        if (opt.dump_kernels) {
            write_kernel_csv(artifacts.train_kernel,
                             (dir / "train_kernel.csv").string());
            write_kernel_csv(artifacts.cross_kernel,
                             (dir / "cross_kernel.csv").string());
        }
    }
    return 0;
}

int run_suite_cmd(const CLI::App *cmd, const CliOptions &opt) {
    const ExperimentConfig base = build_config(cmd, opt);
    const auto maps = default_suite_maps();
    const auto rows = run_suite(base, maps);

    std::cout << render_table(rows);
    bool any_failed = false;
    for (const auto &row : rows) {
        any_failed = any_failed || !row.ok;
    }

    if (!opt.out_dir.empty()) {
        const std::filesystem::path dir(opt.out_dir);
        std::filesystem::create_directories(dir);
        write_text_file(dir / "report.json", suite_to_json(rows).dump(2) +
                                                 "\n");
        write_text_file(dir / "report.csv", suite_to_csv(rows));
        if (opt.dump_kernels) {
            for (const auto &map : maps) {
                ExperimentConfig config = base;
                config.feature_map = map;
                RunArtifacts artifacts;
                try {
                    run_experiment(config, &artifacts);
                } catch (const std::exception &) {
                    continue; // already reported in the table
                }
                const std::string stem{family_name(map.family)};
                write_kernel_csv(
                    artifacts.train_kernel,
                    (dir / (stem + "_train_kernel.csv")).string());
                write_kernel_csv(
                    artifacts.cross_kernel,
                    (dir / (stem + "_cross_kernel.csv")).string());
            }
        }
    }
    return any_failed ? 1 : 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum-kernel SVM benchmark"};
    app.require_subcommand(1);

    CliOptions run_opt;
    CLI::App *run_cmd = app.add_subcommand("run", "run one experiment");
    add_common_flags(run_cmd, run_opt);
    run_cmd->add_option("--map", run_opt.map_name,
                        "feature map family name");
    run_cmd->add_option("--reps", run_opt.repetitions,
                        "encoding layer repetitions");
    run_cmd->add_option("--angle-scale", run_opt.angle_scale,
                        "rotation angle scale");

    CliOptions suite_opt;
    CLI::App *suite_cmd =
        app.add_subcommand("suite", "compare the nine feature maps");
    add_common_flags(suite_cmd, suite_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return run_single(run_cmd, run_opt);
        }
        return run_suite_cmd(suite_cmd, suite_opt);
    } catch (const std::exception &e) {
        std::cerr << "qksvm: " << e.what() << '\n';
        return 1;
    }
}

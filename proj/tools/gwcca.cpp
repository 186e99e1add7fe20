// Command-line front end: fit, scan, synth, eval, summarize.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <tuple>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gwcca/config.hpp"
#include "gwcca/csv.hpp"
#include "gwcca/error.hpp"
#include "gwcca/eval.hpp"
#include "gwcca/pipeline.hpp"
#include "gwcca/preprocess.hpp"
#include "gwcca/synth.hpp"

namespace {

using gwcca::Config;

// Flags shared by the subcommands that fit. Unset flags leave the config alone.
struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kernel;
  std::optional<long long> k;
  std::optional<double> bandwidth;
  std::optional<unsigned> threads;
  std::vector<std::string> overrides;  // section.key=value

  void attach(CLI::App* cmd, bool with_bandwidth) {
    cmd->add_option("--config", config_path, "Configuration file");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    if (with_bandwidth) {
      cmd->add_option("--kernel", kernel,
                      "gaussian, exponential, boxcar, bisquare or tricube");
      auto* k_opt = cmd->add_option("--k", k, "Fixed adaptive bandwidth (neighbours)");
      auto* bw_opt = cmd->add_option("--bandwidth", bandwidth, "Fixed distance bandwidth");
      k_opt->excludes(bw_opt);
    }
    cmd->add_option("--set", overrides, "Override a config key: section.key=value");
  }

  Config resolve() const {
    Config config = config_path.empty() ? Config{} : gwcca::load_config(config_path);
    for (const auto& item : overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw gwcca::ConfigError("--set expects section.key=value, got '" + item + "'");
      }
      config.set(item.substr(0, eq), item.substr(eq + 1));
    }
    if (seed) config.run.seed = *seed;
    if (threads) config.run.threads = *threads;
    if (kernel) config.set("kernel.family", *kernel);
    if (k) {
      if (*k < 1) throw gwcca::ConfigError("--k must be at least 1");
      config.kernel.k = static_cast<Eigen::Index>(*k);
      config.kernel.bandwidth.reset();
    }
    if (bandwidth) {
      config.kernel.bandwidth = *bandwidth;
      config.kernel.k.reset();
    }
    config.validate();
    return config;
  }
};

void print_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

int run_fit(const std::string& data_path, const std::string& prefix, const CommonFlags& flags) {
  const Config config = flags.resolve();
  gwcca::FitResult result =
      gwcca::run_pipeline(gwcca::load_csv(data_path, config.schema), config);
  const gwcca::Summary summary = gwcca::summarize(result);
  std::cout << "n = " << result.data.n() << ", p = " << result.data.p()
            << ", q = " << result.data.q() << ", kernel " << result.kernel.describe();
  if (result.scan) std::cout << " (" << gwcca::to_string(result.scan->stop_reason) << ")";
  std::cout << "\nretained:";
  for (auto j : result.retained) std::cout << ' ' << j + 1;
  std::cout << "\nreported:";
  for (auto j : result.reported) std::cout << ' ' << j + 1;
  std::cout << "\n\n" << gwcca::format_summary(summary) << '\n';
  print_files(gwcca::export_fit(result, summary, prefix));
  return 0;
}

int run_scan(const std::string& data_path, const std::string& prefix, const CommonFlags& flags,
             bool no_early_stop) {
  Config config = flags.resolve();
  if (no_early_stop) config.run.early_stop = false;
  gwcca::LoadedData loaded = gwcca::load_csv(data_path, config.schema);
  gwcca::preprocess(loaded.data, config.preprocess);
  const gwcca::ScanResult scan = gwcca::run_scan(loaded.data, config);
  std::printf("%8s %4s %12s  %s\n", "k", "dim", "rgof", "retained");
  for (const auto& rec : scan.records) {
    std::string kept;
    for (auto j : rec.retained) kept += (kept.empty() ? "" : ",") + std::to_string(j + 1);
    std::printf("%8ld %4ld %12.6f  %s\n", static_cast<long>(rec.candidate_k),
                static_cast<long>(rec.screened_dimension), rec.rgof, kept.c_str());
  }
  std::cout << "chosen k = " << scan.chosen_k << " (" << gwcca::to_string(scan.stop_reason)
            << ")\n";
  const std::filesystem::path out = prefix + "_scan.csv";
  gwcca::csv::write_file(out, gwcca::scan_csv(scan));
  print_files({out});
  return 0;
}

int run_synth(int dataset, const std::string& prefix, const CommonFlags& flags) {
  Config config = flags.resolve();
  if (dataset != 0) config.synth.dataset = dataset;
  gwcca::SpatialDataset data;
  gwcca::synth::SyntheticTruth truth;
  if (config.synth.dataset == 1) {
    auto params = config.synth.dataset1;
    params.seed = config.run.seed;
    std::tie(data, truth) = gwcca::synth::generate_dataset1(params);
  } else if (config.synth.dataset == 2) {
    auto params = config.synth.dataset2;
    params.seed = config.run.seed;
    std::tie(data, truth) = gwcca::synth::generate_dataset2(params);
  } else {
    throw gwcca::ConfigError("--dataset must be 1 or 2");
  }
  using gwcca::csv::format_number;
  std::ostringstream d;
  d << "id,x,y";
  for (const auto& name : data.x_names) d << ',' << name;
  for (const auto& name : data.y_names) d << ',' << name;
  d << '\n';
  std::ostringstream t;
  t << "id,x,y";
  for (Eigen::Index j = 0; j < truth.rho_fields.cols(); ++j) t << ",rho" << j + 1 << "_true";
  t << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const std::string head = data.ids[static_cast<std::size_t>(i)] + ',' +
                             format_number(data.coords(i, 0)) + ',' +
                             format_number(data.coords(i, 1));
    d << head;
    for (Eigen::Index m = 0; m < data.p(); ++m) d << ',' << format_number(data.x(i, m));
    for (Eigen::Index m = 0; m < data.q(); ++m) d << ',' << format_number(data.y(i, m));
    d << '\n';
    t << head;
    for (Eigen::Index j = 0; j < truth.rho_fields.cols(); ++j) {
      t << ',' << format_number(truth.rho_fields(i, j));
    }
    t << '\n';
  }
  const std::filesystem::path data_out = prefix + "_data.csv";
  const std::filesystem::path truth_out = prefix + "_truth.csv";
  gwcca::csv::write_file(data_out, d.str());
  gwcca::csv::write_file(truth_out, t.str());
  print_files({data_out, truth_out});
  return 0;
}

int run_eval(const std::string& fit_path, const std::string& truth_path,
             const std::string& baseline_path, const std::string& out_path,
             const std::string& label) {
  const gwcca::csv::Table truth_table = gwcca::csv::read(truth_path);
  const gwcca::csv::Table fit_table = gwcca::csv::read(fit_path);
  const gwcca::csv::Table base_table = gwcca::csv::read(baseline_path);

  Eigen::Index fields = 0;
  while (truth_table.find("rho" + std::to_string(fields + 1) + "_true")) ++fields;
  if (fields == 0) throw gwcca::InputError(truth_path + ": no rhoJ_true columns");
  Eigen::Index estimated = 0;
  while (fit_table.find("rho_" + std::to_string(estimated + 1))) ++estimated;
  if (estimated < fields) {
    throw gwcca::InputError(fit_path + ": has " + std::to_string(estimated) +
                            " leading rho_J columns, truth has " + std::to_string(fields) +
                            " fields (use the _rho.csv export)");
  }
  if (fit_table.rows.size() != truth_table.rows.size()) {
    throw gwcca::InputError("fit and truth files have different row counts");
  }
  const std::size_t fid = fit_table.require("id");
  const std::size_t tid = truth_table.require("id");
  for (std::size_t i = 0; i < fit_table.rows.size(); ++i) {
    if (fit_table.rows[i][fid] != truth_table.rows[i][tid]) {
      throw gwcca::InputError("fit and truth ids differ at row " + std::to_string(i + 2));
    }
  }
  const Eigen::MatrixXd truth = gwcca::read_indexed_columns(truth_table, "rho", "_true", fields);
  const Eigen::MatrixXd local = gwcca::read_indexed_columns(fit_table, "rho_", "", estimated);
  const std::size_t vcol = base_table.require("variate");
  const std::size_t rcol = base_table.require("rho");
  Eigen::VectorXd global(static_cast<Eigen::Index>(base_table.rows.size()));
  for (std::size_t r = 0; r < base_table.rows.size(); ++r) {
    const auto v = gwcca::csv::parse_cell(base_table.rows[r][vcol], "variate");
    const auto g = gwcca::csv::parse_cell(base_table.rows[r][rcol], "rho");
    if (!v || !g || *v != static_cast<double>(r + 1)) {
      throw gwcca::InputError(baseline_path + ": expected variates 1.." +
                              std::to_string(base_table.rows.size()) + " in order");
    }
    global(static_cast<Eigen::Index>(r)) = *g;
  }
  const gwcca::eval::EvalReport report = gwcca::eval::compare_models(local, global, truth);
  const std::string table = gwcca::eval::report_csv(report, label);
  std::cout << table;
  if (!out_path.empty()) {
    gwcca::csv::write_file(out_path, table);
    print_files({out_path});
  }
  return 0;
}

int run_summarize(const std::string& fit_path, const std::string& prefix) {
  const gwcca::LocationTable table = gwcca::read_locations(fit_path);
  const gwcca::Summary summary = gwcca::summarize(table);
  std::cout << gwcca::format_summary(summary);
  if (!prefix.empty()) {
    const std::filesystem::path rho_out = prefix + "_summary_rho.csv";
    const std::filesystem::path load_out = prefix + "_summary_loadings.csv";
    gwcca::csv::write_file(rho_out, gwcca::summary_rho_csv(summary));
    gwcca::csv::write_file(load_out, gwcca::summary_loadings_csv(summary));
    print_files({rho_out, load_out});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geographically weighted canonical correlation analysis"};
  app.set_version_flag("--version", GWCCA_VERSION);
  app.require_subcommand(1);

  std::string data_path;
  std::string prefix = "gwcca";

  CommonFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "Fit local CCA at every location and export results");
  fit_cmd->add_option("--data", data_path, "Input CSV")->required();
  fit_cmd->add_option("--out", prefix, "Output prefix");
  fit_flags.attach(fit_cmd, true);

  CommonFlags scan_flags;
  bool no_early_stop = false;
  auto* scan_cmd = app.add_subcommand("scan", "Bandwidth diagnostics only");
  scan_cmd->add_option("--data", data_path, "Input CSV")->required();
  scan_cmd->add_option("--out", prefix, "Output prefix");
  scan_cmd->add_flag("--no-early-stop", no_early_stop, "Evaluate the whole grid");
  scan_flags.attach(scan_cmd, true);

  CommonFlags synth_flags;
  int dataset = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset and its truth");
  synth_cmd->add_option("--dataset", dataset, "1 or 2");
  synth_cmd->add_option("--out", prefix, "Output prefix");
  synth_flags.attach(synth_cmd, false);

  std::string fit_path;
  std::string truth_path;
  std::string baseline_path;
  std::string eval_out;
  std::string label = "dataset";
  auto* eval_cmd = app.add_subcommand("eval", "Error metrics against a synthetic truth");
  eval_cmd->add_option("--fit", fit_path, "Local rho CSV (the _rho.csv export)")->required();
  eval_cmd->add_option("--truth", truth_path, "Truth CSV from synth")->required();
  eval_cmd->add_option("--baseline", baseline_path, "Global CCA CSV (_global.csv)")->required();
  eval_cmd->add_option("--out", eval_out, "Output CSV");
  eval_cmd->add_option("--label", label, "Dataset label in the output");

  std::string summary_prefix;
  auto* sum_cmd = app.add_subcommand("summarize", "Summary tables from a locations CSV");
  sum_cmd->add_option("--fit", fit_path, "Locations CSV (_locations.csv)")->required();
  sum_cmd->add_option("--out", summary_prefix, "Output prefix for the summary CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (*fit_cmd) return run_fit(data_path, prefix, fit_flags);
    if (*scan_cmd) return run_scan(data_path, prefix, scan_flags, no_early_stop);
    if (*synth_cmd) return run_synth(dataset, prefix, synth_flags);
    if (*eval_cmd) return run_eval(fit_path, truth_path, baseline_path, eval_out, label);
    if (*sum_cmd) return run_summarize(fit_path, summary_prefix);
  } catch (const gwcca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

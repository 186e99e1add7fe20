#ifndef GWCCA_CONFIG_HPP
#define GWCCA_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwcca/kernels.hpp"
#include "gwcca/selection.hpp"
#include "gwcca/synth.hpp"

namespace gwcca {

/// Column layout of an input CSV. Empty variable lists mean "every column named
/// X<digits>" (resp. Y<digits>), in file order.
struct Schema {
  std::string id_column = "id";
  std::string x_column = "x";
  std::string y_column = "y";
  std::vector<std::string> x_vars;
  std::vector<std::string> y_vars;
};

struct PreprocessConfig {
  bool filter = true;
  double collinearity_threshold = 0.7;
  bool standardize = true;
};

struct KernelConfig {
  KernelFamily family = KernelFamily::gaussian;
  std::optional<Eigen::Index> k;     // fixed adaptive bandwidth; skips the scan
  std::optional<double> bandwidth;   // fixed distance bandwidth; skips the scan
};

struct RunConfig {
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  double ridge = 0.0;
  bool early_stop = true;
  bool align_signs = false;
};

struct SynthConfig {
  int dataset = 1;
  synth::Params1 dataset1;
  synth::Params2 dataset2;
};

/// Everything a run needs. Sections of the file map one-to-one onto the members.
///
///   [data]       id, x, y, x_vars, y_vars, filter, collinearity_threshold, standardize
///   [kernel]     family, k, bandwidth
///   [scan]       spacing, k_min, k_max, step, count
///   [selection]  phi, alpha, beta, report_threshold, patience, improvement_tol
///   [run]        seed, threads, ridge, early_stop, align_signs
///   [synth]      dataset, n, grid_size, p, q, jitter, rho1_slope, rho1_intercept,
///                bump_beta0, bump_beta1, bump_center_x, bump_center_y, bump_sigma,
///                rho_cap, length_scale, marginal_sigma, tanh_alpha, rho_base, rho_amp
///
/// Lists are comma-separated; booleans accept true/false/yes/no/1/0; comments
/// start with ';' or '#'.
struct Config {
  Schema schema;
  PreprocessConfig preprocess;
  KernelConfig kernel;
  CandidateGrid grid;
  SelectionConfig selection;
  RunConfig run;
  SynthConfig synth;

  /// Sets "section.key" from its text form. ConfigError on unknown keys or bad values.
  void set(std::string_view dotted_key, std::string_view value);

  /// Range checks across all sections.
  void validate() const;

  /// Canonical text form; parses back to the same configuration.
  [[nodiscard]] std::string to_ini() const;
};

Config load_config(const std::filesystem::path& path);
Config parse_config(std::string_view text);

}  // namespace gwcca

#endif  // GWCCA_CONFIG_HPP

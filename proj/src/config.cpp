#include "gwcca/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gwcca/csv.hpp"
#include "gwcca/error.hpp"

namespace gwcca {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
  throw ConfigError(std::string(key) + ": '" + std::string(value) + "' is not " +
                    std::string(what));
}

double to_double(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

long long to_integer(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, value, "an integer");
  }
  return out;
}

Eigen::Index to_count(std::string_view key, std::string_view value) {
  const long long v = to_integer(key, value);
  if (v < 0) bad_value(key, value, "a nonnegative integer");
  return static_cast<Eigen::Index>(v);
}

std::uint64_t to_seed(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, value, "a nonnegative integer");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  std::string v = trim(value);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  bad_value(key, value, "a boolean");
}

std::vector<std::string> to_list(std::string_view value) {
  std::vector<std::string> out;
  for (auto& field : csv::split_line(value)) {
    std::string t = trim(field);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += csv::quote(items[i]);
  }
  return out;
}

const char* bool_text(bool v) { return v ? "true" : "false"; }

}  // namespace

void Config::set(std::string_view dotted_key, std::string_view value) {
  const std::string key = trim(dotted_key);
  const auto& k = key;
  // [data]
  if (k == "data.id") schema.id_column = trim(value);
  else if (k == "data.x") schema.x_column = trim(value);
  else if (k == "data.y") schema.y_column = trim(value);
  else if (k == "data.x_vars") schema.x_vars = to_list(value);
  else if (k == "data.y_vars") schema.y_vars = to_list(value);
  else if (k == "data.filter") preprocess.filter = to_bool(k, value);
  else if (k == "data.collinearity_threshold") preprocess.collinearity_threshold = to_double(k, value);
  else if (k == "data.standardize") preprocess.standardize = to_bool(k, value);
  // [kernel]
  else if (k == "kernel.family") kernel.family = parse_kernel_family(trim(value));
  else if (k == "kernel.k") {
    if (trim(value).empty()) kernel.k.reset();
    else kernel.k = to_count(k, value);
  } else if (k == "kernel.bandwidth") {
    if (trim(value).empty()) kernel.bandwidth.reset();
    else kernel.bandwidth = to_double(k, value);
  }
  // [scan]
  else if (k == "scan.spacing") {
    const std::string v = trim(value);
    if (v == "linear") grid.spacing = CandidateGrid::Spacing::linear;
    else if (v == "geometric") grid.spacing = CandidateGrid::Spacing::geometric;
    else bad_value(k, value, "'linear' or 'geometric'");
  } else if (k == "scan.k_min") grid.k_min = to_count(k, value);
  else if (k == "scan.k_max") grid.k_max = to_count(k, value);
  else if (k == "scan.step") grid.step = to_count(k, value);
  else if (k == "scan.count") grid.count = to_count(k, value);
  // [selection]
  else if (k == "selection.phi") selection.phi = to_double(k, value);
  else if (k == "selection.alpha") selection.alpha = to_double(k, value);
  else if (k == "selection.beta") selection.beta = to_double(k, value);
  else if (k == "selection.report_threshold") selection.report_threshold = to_double(k, value);
  else if (k == "selection.patience") selection.patience = static_cast<int>(to_integer(k, value));
  else if (k == "selection.improvement_tol") selection.improvement_tol = to_double(k, value);
  // [run]
  else if (k == "run.seed") run.seed = to_seed(k, value);
  else if (k == "run.threads") run.threads = static_cast<unsigned>(to_count(k, value));
  else if (k == "run.ridge") run.ridge = to_double(k, value);
  else if (k == "run.early_stop") run.early_stop = to_bool(k, value);
  else if (k == "run.align_signs") run.align_signs = to_bool(k, value);
  // [synth]
  else if (k == "synth.dataset") synth.dataset = static_cast<int>(to_integer(k, value));
  else if (k == "synth.n") synth.dataset1.n = to_count(k, value);
  else if (k == "synth.grid_size") synth.dataset2.grid_size = to_count(k, value);
  else if (k == "synth.p") synth.dataset1.p = synth.dataset2.p = to_count(k, value);
  else if (k == "synth.q") synth.dataset1.q = synth.dataset2.q = to_count(k, value);
  else if (k == "synth.jitter") synth.dataset1.jitter = synth.dataset2.jitter = to_double(k, value);
  else if (k == "synth.rho1_slope") synth.dataset1.rho1_slope = to_double(k, value);
  else if (k == "synth.rho1_intercept") synth.dataset1.rho1_intercept = to_double(k, value);
  else if (k == "synth.bump_beta0") synth.dataset1.bump.beta0 = to_double(k, value);
  else if (k == "synth.bump_beta1") synth.dataset1.bump.beta1 = to_double(k, value);
  else if (k == "synth.bump_center_x") synth.dataset1.bump.center.x() = to_double(k, value);
  else if (k == "synth.bump_center_y") synth.dataset1.bump.center.y() = to_double(k, value);
  else if (k == "synth.bump_sigma") synth.dataset1.bump.sigma = to_double(k, value);
  else if (k == "synth.rho_cap") synth.dataset1.rho_cap = to_double(k, value);
  else if (k == "synth.length_scale") synth.dataset2.grf.length_scale = to_double(k, value);
  else if (k == "synth.marginal_sigma") synth.dataset2.grf.marginal_sigma = to_double(k, value);
  else if (k == "synth.tanh_alpha") synth.dataset2.tanh_alpha = to_double(k, value);
  else if (k == "synth.rho_base") synth.dataset2.rho_base = to_double(k, value);
  else if (k == "synth.rho_amp") synth.dataset2.rho_amp = to_double(k, value);
  else throw ConfigError("unknown configuration key '" + key + "'");
}

void Config::validate() const {
  if (!(preprocess.collinearity_threshold > 0.0 && preprocess.collinearity_threshold <= 1.0)) {
    throw ConfigError("data.collinearity_threshold must lie in (0, 1]");
  }
  if (kernel.k && kernel.bandwidth) {
    throw ConfigError("kernel.k and kernel.bandwidth are mutually exclusive");
  }
  if (kernel.k && *kernel.k < 1) throw ConfigError("kernel.k must be at least 1");
  if (kernel.bandwidth && !(*kernel.bandwidth > 0.0)) {
    throw ConfigError("kernel.bandwidth must be positive");
  }
  if (grid.k_max > 0 && grid.k_min > grid.k_max) {
    throw ConfigError("scan.k_min exceeds scan.k_max");
  }
  if (grid.step < 1) throw ConfigError("scan.step must be at least 1");
  if (grid.count < 1) throw ConfigError("scan.count must be at least 1");
  if (!(run.ridge >= 0.0)) throw ConfigError("run.ridge must be nonnegative");
  if (synth.dataset != 1 && synth.dataset != 2) throw ConfigError("synth.dataset must be 1 or 2");
  try {
    selection.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

std::string Config::to_ini() const {
  using csv::format_number;
  std::ostringstream out;
  out << "[data]\n"
      << "id = " << schema.id_column << '\n'
      << "x = " << schema.x_column << '\n'
      << "y = " << schema.y_column << '\n'
      << "x_vars = " << join(schema.x_vars) << '\n'
      << "y_vars = " << join(schema.y_vars) << '\n'
      << "filter = " << bool_text(preprocess.filter) << '\n'
      << "collinearity_threshold = " << format_number(preprocess.collinearity_threshold) << '\n'
      << "standardize = " << bool_text(preprocess.standardize) << "\n\n";
  out << "[kernel]\n"
      << "family = " << to_string(kernel.family) << '\n'
      << "k = " << (kernel.k ? std::to_string(*kernel.k) : std::string()) << '\n'
      << "bandwidth = " << (kernel.bandwidth ? format_number(*kernel.bandwidth) : std::string())
      << "\n\n";
  out << "[scan]\n"
      << "spacing = "
      << (grid.spacing == CandidateGrid::Spacing::linear ? "linear" : "geometric") << '\n'
      << "k_min = " << grid.k_min << '\n'
      << "k_max = " << grid.k_max << '\n'
      << "step = " << grid.step << '\n'
      << "count = " << grid.count << "\n\n";
  out << "[selection]\n"
      << "phi = " << format_number(selection.phi) << '\n'
      << "alpha = " << format_number(selection.alpha) << '\n'
      << "beta = " << format_number(selection.beta) << '\n'
      << "report_threshold = " << format_number(selection.report_threshold) << '\n'
      << "patience = " << selection.patience << '\n'
      << "improvement_tol = " << format_number(selection.improvement_tol) << "\n\n";
  out << "[run]\n"
      << "seed = " << run.seed << '\n'
      << "threads = " << run.threads << '\n'
      << "ridge = " << format_number(run.ridge) << '\n'
      << "early_stop = " << bool_text(run.early_stop) << '\n'
      << "align_signs = " << bool_text(run.align_signs) << "\n\n";
  const auto& s1 = synth.dataset1;
  const auto& s2 = synth.dataset2;
  out << "[synth]\n"
      << "dataset = " << synth.dataset << '\n'
      << "n = " << s1.n << '\n'
      << "grid_size = " << s2.grid_size << '\n'
      << "p = " << s1.p << '\n'
      << "q = " << s1.q << '\n'
      << "jitter = " << format_number(s1.jitter) << '\n'
      << "rho1_slope = " << format_number(s1.rho1_slope) << '\n'
      << "rho1_intercept = " << format_number(s1.rho1_intercept) << '\n'
      << "bump_beta0 = " << format_number(s1.bump.beta0) << '\n'
      << "bump_beta1 = " << format_number(s1.bump.beta1) << '\n'
      << "bump_center_x = " << format_number(s1.bump.center.x()) << '\n'
      << "bump_center_y = " << format_number(s1.bump.center.y()) << '\n'
      << "bump_sigma = " << format_number(s1.bump.sigma) << '\n'
      << "rho_cap = " << format_number(s1.rho_cap) << '\n'
      << "length_scale = " << format_number(s2.grf.length_scale) << '\n'
      << "marginal_sigma = " << format_number(s2.grf.marginal_sigma) << '\n'
      << "tanh_alpha = " << format_number(s2.tanh_alpha) << '\n'
      << "rho_base = " << format_number(s2.rho_base) << '\n'
      << "rho_amp = " << format_number(s2.rho_amp) << '\n';
  return out.str();
}

Config parse_config(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("configuration syntax: ") + e.what());
  }
  Config config;
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw ConfigError("configuration key '" + section + "' is outside any section");
    }
    for (const auto& [key, node] : entries) {
      config.set(section + "." + key, node.data());
    }
  }
  config.validate();
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace gwcca

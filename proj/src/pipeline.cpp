#include "gwcca/pipeline.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>
#include <map>
#include <sstream>

#include "gwcca/csv.hpp"
#include "gwcca/error.hpp"

namespace gwcca {

namespace {

using csv::format_number;

std::string one_based_list(const std::vector<Eigen::Index>& idx, char sep) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out.push_back(sep);
    out += std::to_string(idx[i] + 1);
  }
  return out;
}

std::string name_list(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

std::string vector_list(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v(i));
  }
  return out;
}

void append_stats(std::ostringstream& out, const stats::FiveNumber& s) {
  out << format_number(s.min) << ',' << format_number(s.q25) << ','
      << format_number(s.median) << ',' << format_number(s.q75) << ','
      << format_number(s.max);
}

}  // namespace

ScanResult run_scan(const SpatialDataset& data, const Config& config) {
  const std::vector<Eigen::Index> ks = config.grid.build(data.n(), data.p(), data.q());
  SelectionConfig selection = config.selection;
  if (!config.run.early_stop) selection.patience = INT_MAX;
  return early_stop_scan(data, config.kernel.family, ks, selection, config.run.ridge,
                         config.run.threads);
}

FitResult fit(SpatialDataset data, const Config& config, PreprocessLog log) {
  config.validate();
  data.fill_default_labels();
  data.validate();
  FitResult result;
  result.config = config;
  result.log = std::move(log);

  if (config.kernel.bandwidth) {
    result.kernel = KernelSpec::fixed(config.kernel.family, *config.kernel.bandwidth);
  } else if (config.kernel.k) {
    result.kernel = KernelSpec::adaptive(config.kernel.family, *config.kernel.k);
  } else {
    result.scan = run_scan(data, config);
    result.kernel = KernelSpec::adaptive(config.kernel.family, result.scan->chosen_k);
  }
  result.kernel.validate(data.n());

  result.fits = fit_locations(data, result.kernel, config.run.ridge, config.run.threads);
  if (config.run.align_signs) align_signs_to_neighbors(result.fits, data.coords);
  result.selection = evaluate_fits(result.fits, config.selection);
  if (const auto* adaptive = std::get_if<AdaptiveBandwidth>(&result.kernel.bandwidth)) {
    result.selection.candidate_k = adaptive->neighbors;
  }
  result.retained = result.selection.retained;
  for (Eigen::Index j : result.retained) {
    if (result.selection.mean_rho_by_variate[static_cast<std::size_t>(j)] >=
        config.selection.report_threshold) {
      result.reported.push_back(j);
    }
  }
  result.global = global_cca(data.x, data.y, config.run.ridge);
  result.data = std::move(data);
  return result;
}

FitResult run_pipeline(LoadedData loaded, const Config& config) {
  PreprocessLog log = preprocess(loaded.data, config.preprocess);
  log.rows_read = loaded.rows_read;
  log.rows_dropped = loaded.rows_dropped;
  return fit(std::move(loaded.data), config, std::move(log));
}

LocationTable location_table(const FitResult& fit) {
  const auto& d = fit.data;
  const Eigen::Index n = d.n();
  LocationTable t;
  t.ids = d.ids;
  t.coords = d.coords;
  t.bandwidth.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.bandwidth(i) = fit.fits[static_cast<std::size_t>(i)].bandwidth_used;
  }
  t.x_names = d.x_names;
  t.y_names = d.y_names;
  t.rho.resize(n, static_cast<Eigen::Index>(fit.reported.size()));
  for (std::size_t r = 0; r < fit.reported.size(); ++r) {
    const Eigen::Index j = fit.reported[r];
    t.variates.push_back(j + 1);
    Eigen::MatrixXd a(n, d.p());
    Eigen::MatrixXd b(n, d.q());
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& sol = fit.fits[static_cast<std::size_t>(i)].solution;
      t.rho(i, static_cast<Eigen::Index>(r)) = sol.rho(j);
      a.row(i) = sol.a_weights.col(j).transpose();
      b.row(i) = sol.b_weights.col(j).transpose();
    }
    t.a.push_back(std::move(a));
    t.b.push_back(std::move(b));
  }
  return t;
}

LocationTable read_locations(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  LocationTable t;
  try {
    const std::size_t c_id = table.require("id");
    const std::size_t c_x = table.require("x");
    const std::size_t c_y = table.require("y");
    const std::size_t c_bw = table.require("bandwidth");
    std::vector<std::pair<Eigen::Index, std::size_t>> rho_cols;
    // (variate, name) -> column
    std::map<std::pair<Eigen::Index, std::string>, std::size_t> a_cols;
    std::map<std::pair<Eigen::Index, std::string>, std::size_t> b_cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      const std::string& h = table.header[c];
      if (h.rfind("rho_", 0) == 0) {
        rho_cols.emplace_back(std::stol(h.substr(4)), c);
        continue;
      }
      if ((h[0] == 'a' || h[0] == 'b') && h.size() > 2) {
        const std::size_t us = h.find('_');
        if (us == std::string::npos || us < 2) continue;
        const std::string digits = h.substr(1, us - 1);
        if (digits.find_first_not_of("0123456789") != std::string::npos) continue;
        const std::string name = h.substr(us + 1);
        const Eigen::Index j = std::stol(digits);
        auto& target = h[0] == 'a' ? a_cols : b_cols;
        target[{j, name}] = c;
        auto& names = h[0] == 'a' ? t.x_names : t.y_names;
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
      }
    }
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    const auto r = static_cast<Eigen::Index>(rho_cols.size());
    t.coords.resize(n, 2);
    t.bandwidth.resize(n);
    t.rho.resize(n, r);
    auto number = [&](std::size_t row, std::size_t col) {
      const auto v = csv::parse_cell(table.rows[row][col], table.header[col]);
      if (!v) throw InputError("missing value in column '" + table.header[col] + "'");
      return *v;
    };
    for (Eigen::Index k = 0; k < r; ++k) t.variates.push_back(rho_cols[static_cast<std::size_t>(k)].first);
    for (Eigen::Index k = 0; k < r; ++k) {
      const Eigen::Index j = t.variates[static_cast<std::size_t>(k)];
      Eigen::MatrixXd a(n, static_cast<Eigen::Index>(t.x_names.size()));
      Eigen::MatrixXd b(n, static_cast<Eigen::Index>(t.y_names.size()));
      for (std::size_t m = 0; m < t.x_names.size(); ++m) {
        const auto it = a_cols.find({j, t.x_names[m]});
        if (it == a_cols.end()) {
          throw InputError("missing column 'a" + std::to_string(j) + "_" + t.x_names[m] + "'");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          a(i, static_cast<Eigen::Index>(m)) = number(static_cast<std::size_t>(i), it->second);
        }
      }
      for (std::size_t m = 0; m < t.y_names.size(); ++m) {
        const auto it = b_cols.find({j, t.y_names[m]});
        if (it == b_cols.end()) {
          throw InputError("missing column 'b" + std::to_string(j) + "_" + t.y_names[m] + "'");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          b(i, static_cast<Eigen::Index>(m)) = number(static_cast<std::size_t>(i), it->second);
        }
      }
      t.a.push_back(std::move(a));
      t.b.push_back(std::move(b));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      t.ids.push_back(table.rows[row][c_id]);
      t.coords(i, 0) = number(row, c_x);
      t.coords(i, 1) = number(row, c_y);
      t.bandwidth(i) = number(row, c_bw);
      for (Eigen::Index k = 0; k < r; ++k) {
        t.rho(i, k) = number(row, rho_cols[static_cast<std::size_t>(k)].second);
      }
    }
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  } catch (const std::logic_error&) {
    throw InputError(path.string() + ": malformed variate column name");
  }
  return t;
}

Summary summarize(const LocationTable& table) {
  Summary s;
  for (std::size_t k = 0; k < table.variates.size(); ++k) {
    const Eigen::VectorXd col = table.rho.col(static_cast<Eigen::Index>(k));
    s.rho.push_back({table.variates[k], stats::describe({col.data(), static_cast<std::size_t>(col.size())}),
                     std::nullopt});
  }
  for (std::size_t k = 0; k < table.variates.size(); ++k) {
    auto add = [&](const Eigen::MatrixXd& block, const std::vector<std::string>& names, char set) {
      for (Eigen::Index m = 0; m < block.cols(); ++m) {
        const Eigen::VectorXd col = block.col(m);
        s.loadings.push_back({table.variates[k], set, names[static_cast<std::size_t>(m)],
                              stats::describe({col.data(), static_cast<std::size_t>(col.size())})});
      }
    };
    add(table.a[k], table.x_names, 'X');
    add(table.b[k], table.y_names, 'Y');
  }
  return s;
}

Summary summarize(const FitResult& fit) {
  Summary s = summarize(location_table(fit));
  const Eigen::MatrixXd rhos = local_rhos(fit.fits);
  s.rho.clear();
  for (Eigen::Index j = 0; j < rhos.cols(); ++j) {
    const Eigen::VectorXd col = rhos.col(j);
    s.rho.push_back({j + 1, stats::describe({col.data(), static_cast<std::size_t>(col.size())}),
                     fit.global.rho(j)});
  }
  return s;
}

std::string summary_rho_csv(const Summary& summary) {
  std::ostringstream out;
  out << "variate,min,q25,median,q75,max,mean,global\n";
  for (const auto& row : summary.rho) {
    out << row.variate << ',';
    append_stats(out, row.stats);
    out << ',' << format_number(row.stats.mean) << ','
        << (row.global ? format_number(*row.global) : std::string()) << '\n';
  }
  return out.str();
}

std::string summary_loadings_csv(const Summary& summary) {
  std::ostringstream out;
  out << "variate,set,variable,min,q25,median,q75,max,abs_mean\n";
  for (const auto& row : summary.loadings) {
    out << row.variate << ',' << row.set << ',' << csv::quote(row.variable) << ',';
    append_stats(out, row.stats);
    out << ',' << format_number(row.stats.abs_mean) << '\n';
  }
  return out.str();
}

std::string format_summary(const Summary& summary) {
  std::ostringstream out;
  char line[256];
  out << "Local canonical correlations\n";
  std::snprintf(line, sizeof line, "%-10s %8s %8s %8s %8s %8s %8s %8s\n", "", "Min", "25%",
                "50%", "75%", "Max", "Mean", "Global");
  out << line;
  for (const auto& row : summary.rho) {
    const auto& s = row.stats;
    const std::string label = "Variate " + std::to_string(row.variate);
    std::snprintf(line, sizeof line, "%-10s %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f ",
                  label.c_str(), s.min, s.q25, s.median, s.q75, s.max, s.mean);
    out << line;
    if (row.global) {
      std::snprintf(line, sizeof line, "%8.3f\n", *row.global);
      out << line;
    } else {
      out << std::string(8, ' ') << '\n';
    }
  }
  Eigen::Index current = -1;
  for (const auto& row : summary.loadings) {
    if (row.variate != current) {
      current = row.variate;
      out << "\nLoadings, variate " << current << '\n';
      std::snprintf(line, sizeof line, "%-3s %-16s %8s %8s %8s %8s %8s %8s\n", "Set", "Variable",
                    "Min", "25%", "50%", "75%", "Max", "abs.mean");
      out << line;
    }
    const auto& s = row.stats;
    std::snprintf(line, sizeof line, "%-3c %-16s %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f\n",
                  row.set, row.variable.c_str(), s.min, s.q25, s.median, s.q75, s.max,
                  s.abs_mean);
    out << line;
  }
  return out.str();
}

std::string scan_csv(const ScanResult& scan) {
  std::ostringstream out;
  const std::size_t psi = scan.records.empty() ? 0 : scan.records.front().rgof_by_c.size();
  out << "k,chosen,screened_dimension,rgof,tau,retained";
  for (std::size_t c = 1; c <= psi; ++c) out << ",rgof_c" << c;
  for (std::size_t c = 1; c <= psi; ++c) out << ",mean_rho_" << c;
  for (std::size_t c = 1; c <= psi; ++c) out << ",support_" << c;
  out << '\n';
  for (std::size_t r = 0; r < scan.records.size(); ++r) {
    const auto& rec = scan.records[r];
    out << rec.candidate_k << ',' << (r == scan.chosen_record ? 1 : 0) << ','
        << rec.screened_dimension << ',' << format_number(rec.rgof) << ','
        << format_number(rec.tau) << ',' << one_based_list(rec.retained, ';');
    for (double v : rec.rgof_by_c) out << ',' << format_number(v);
    for (double v : rec.mean_rho_by_variate) out << ',' << format_number(v);
    for (double v : rec.support) out << ',' << format_number(v);
    out << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> export_fit(const FitResult& fit, const Summary& summary,
                                              const std::string& prefix) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const std::string& content) {
    const std::filesystem::path path = prefix + suffix;
    csv::write_file(path, content);
    written.push_back(path);
  };
  const LocationTable t = location_table(fit);
  const auto& d = fit.data;
  const Eigen::Index n = d.n();
  const auto r = t.variates.size();

  {
    std::ostringstream out;
    out << "id,x,y,bandwidth";
    for (auto j : t.variates) out << ",rho_" << j;
    for (auto j : t.variates) {
      for (const auto& name : t.x_names) out << ',' << csv::quote("a" + std::to_string(j) + "_" + name);
    }
    for (auto j : t.variates) {
      for (const auto& name : t.y_names) out << ',' << csv::quote("b" + std::to_string(j) + "_" + name);
    }
    out << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
      out << csv::quote(t.ids[static_cast<std::size_t>(i)]) << ',' << format_number(t.coords(i, 0))
          << ',' << format_number(t.coords(i, 1)) << ',' << format_number(t.bandwidth(i));
      for (std::size_t k = 0; k < r; ++k) out << ',' << format_number(t.rho(i, static_cast<Eigen::Index>(k)));
      for (std::size_t k = 0; k < r; ++k) {
        for (Eigen::Index m = 0; m < t.a[k].cols(); ++m) out << ',' << format_number(t.a[k](i, m));
      }
      for (std::size_t k = 0; k < r; ++k) {
        for (Eigen::Index m = 0; m < t.b[k].cols(); ++m) out << ',' << format_number(t.b[k](i, m));
      }
      out << '\n';
    }
    emit("_locations.csv", out.str());
  }
  {
    const Eigen::MatrixXd rhos = local_rhos(fit.fits);
    std::ostringstream out;
    out << "id,x,y";
    for (Eigen::Index j = 1; j <= rhos.cols(); ++j) out << ",rho_" << j;
    out << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
      out << csv::quote(d.ids[static_cast<std::size_t>(i)]) << ',' << format_number(d.coords(i, 0))
          << ',' << format_number(d.coords(i, 1));
      for (Eigen::Index j = 0; j < rhos.cols(); ++j) out << ',' << format_number(rhos(i, j));
      out << '\n';
    }
    emit("_rho.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "variate,rho";
    for (const auto& name : d.x_names) out << ',' << csv::quote("a_" + name);
    for (const auto& name : d.y_names) out << ',' << csv::quote("b_" + name);
    out << '\n';
    const auto& g = fit.global;
    for (Eigen::Index j = 0; j < g.psi(); ++j) {
      out << j + 1 << ',' << format_number(g.rho(j));
      for (Eigen::Index m = 0; m < g.a_weights.rows(); ++m) out << ',' << format_number(g.a_weights(m, j));
      for (Eigen::Index m = 0; m < g.b_weights.rows(); ++m) out << ',' << format_number(g.b_weights(m, j));
      out << '\n';
    }
    emit("_global.csv", out.str());
  }
  emit("_summary_rho.csv", summary_rho_csv(summary));
  emit("_summary_loadings.csv", summary_loadings_csv(summary));
  {
    std::ostringstream out;
    out << "id,x,y,quantity,variate,value\n";
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string head = csv::quote(t.ids[static_cast<std::size_t>(i)]) + ',' +
                               format_number(t.coords(i, 0)) + ',' +
                               format_number(t.coords(i, 1)) + ',';
      for (std::size_t k = 0; k < r; ++k) {
        const auto j = t.variates[k];
        out << head << "rho," << j << ',' << format_number(t.rho(i, static_cast<Eigen::Index>(k))) << '\n';
        for (Eigen::Index m = 0; m < t.a[k].cols(); ++m) {
          out << head << csv::quote("a_" + t.x_names[static_cast<std::size_t>(m)]) << ',' << j
              << ',' << format_number(t.a[k](i, m)) << '\n';
        }
        for (Eigen::Index m = 0; m < t.b[k].cols(); ++m) {
          out << head << csv::quote("b_" + t.y_names[static_cast<std::size_t>(m)]) << ',' << j
              << ',' << format_number(t.b[k](i, m)) << '\n';
        }
      }
    }
    emit("_long.csv", out.str());
  }
  if (fit.scan) emit("_scan.csv", scan_csv(*fit.scan));
  {
    std::ostringstream out;
    out << "[result]\n"
        << "version = " << GWCCA_VERSION << '\n'
        << "eigen = " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
        << EIGEN_MINOR_VERSION << '\n'
        << "n = " << n << '\n'
        << "p = " << d.p() << '\n'
        << "q = " << d.q() << '\n'
        << "kernel = " << fit.kernel.describe() << '\n'
        << "bandwidth_selection = "
        << (fit.scan ? (fit.config.run.early_stop ? "early-stop scan" : "full scan") : "fixed")
        << '\n';
    if (fit.scan) {
      out << "chosen_k = " << fit.scan->chosen_k << '\n'
          << "stop_reason = " << to_string(fit.scan->stop_reason) << '\n'
          << "candidates_evaluated = " << fit.scan->records.size() << '\n';
    }
    out << "tau = " << format_number(fit.selection.tau) << '\n'
        << "retained = " << one_based_list(fit.retained, ',') << '\n'
        << "reported = " << one_based_list(fit.reported, ',') << "\n\n";
    const auto& log = fit.log;
    out << "[preprocess]\n"
        << "rows_read = " << log.rows_read << '\n'
        << "rows_dropped = " << log.rows_dropped << '\n'
        << "dropped_x = " << name_list(log.dropped_x) << '\n'
        << "dropped_y = " << name_list(log.dropped_y) << '\n'
        << "standardized = " << (log.standardized ? "true" : "false") << '\n'
        << "x_vars = " << name_list(d.x_names) << '\n'
        << "y_vars = " << name_list(d.y_names) << '\n';
    if (log.standardized) {
      out << "x_mean = " << vector_list(log.x_scale.mean) << '\n'
          << "x_sd = " << vector_list(log.x_scale.sd) << '\n'
          << "y_mean = " << vector_list(log.y_scale.mean) << '\n'
          << "y_sd = " << vector_list(log.y_scale.sd) << '\n';
    }
    out << "\n[files]\n";
    for (std::size_t f = 0; f < written.size(); ++f) {
      out << "file" << f + 1 << " = " << written[f].filename().string() << '\n';
    }
    // The thread count does not affect results and is left out so that
    // manifests from runs with different worker counts compare equal.
    Config recorded = fit.config;
    recorded.run.threads = 0;
    out << "\n; configuration\n" << recorded.to_ini();
    emit("_manifest.txt", out.str());
  }
  return written;
}

Eigen::MatrixXd read_indexed_columns(const csv::Table& table, const std::string& prefix,
                                     const std::string& suffix, Eigen::Index count) {
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  Eigen::MatrixXd out(n, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const std::string name = prefix + std::to_string(j + 1) + suffix;
    const std::size_t c = table.require(name);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto v = csv::parse_cell(table.rows[static_cast<std::size_t>(i)][c], name);
      if (!v) throw InputError("missing value in column '" + name + "'");
      out(i, j) = *v;
    }
  }
  return out;
}

}  // namespace gwcca

#include "gwcca/preprocess.hpp"

#include <array>
#include <cmath>
#include <regex>

#include "gwcca/error.hpp"
#include "gwcca/stats.hpp"

namespace gwcca {

namespace {

std::vector<std::string> default_vars(const csv::Table& table, char prefix) {
  const std::regex pattern(std::string(1, prefix) + "[0-9]+");
  std::vector<std::string> out;
  for (const auto& name : table.header) {
    if (std::regex_match(name, pattern)) out.push_back(name);
  }
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& block,
                               const std::vector<Eigen::Index>& keep) {
  Eigen::MatrixXd out(block.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = block.col(keep[c]);
  }
  return out;
}

std::vector<std::string> select_names(const std::vector<std::string>& names,
                                      const std::vector<Eigen::Index>& keep) {
  std::vector<std::string> out;
  for (auto c : keep) out.push_back(names[static_cast<std::size_t>(c)]);
  return out;
}

}  // namespace

LoadedData load_table(const csv::Table& table, const Schema& schema) {
  const std::vector<std::string> x_vars =
      schema.x_vars.empty() ? default_vars(table, 'X') : schema.x_vars;
  const std::vector<std::string> y_vars =
      schema.y_vars.empty() ? default_vars(table, 'Y') : schema.y_vars;
  if (x_vars.empty()) throw InputError("no X-set columns declared or found");
  if (y_vars.empty()) throw InputError("no Y-set columns declared or found");

  const std::optional<std::size_t> id_col = table.find(schema.id_column);
  const std::size_t cx = table.require(schema.x_column);
  const std::size_t cy = table.require(schema.y_column);
  std::vector<std::size_t> xc;
  std::vector<std::size_t> yc;
  for (const auto& v : x_vars) xc.push_back(table.require(v));
  for (const auto& v : y_vars) yc.push_back(table.require(v));

  LoadedData out;
  out.rows_read = table.rows.size();
  const auto p = static_cast<Eigen::Index>(xc.size());
  const auto q = static_cast<Eigen::Index>(yc.size());
  std::vector<std::array<double, 2>> coords;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> row_x(static_cast<std::size_t>(p));
  std::vector<double> row_y(static_cast<std::size_t>(q));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto cell = [&](std::size_t c) { return csv::parse_cell(row[c], table.header[c]); };
    bool complete = true;
    const auto sx = cell(cx);
    const auto sy = cell(cy);
    complete = sx && sy;
    for (Eigen::Index m = 0; m < p && complete; ++m) {
      const auto v = cell(xc[static_cast<std::size_t>(m)]);
      if (!v) complete = false;
      else row_x[static_cast<std::size_t>(m)] = *v;
    }
    for (Eigen::Index m = 0; m < q && complete; ++m) {
      const auto v = cell(yc[static_cast<std::size_t>(m)]);
      if (!v) complete = false;
      else row_y[static_cast<std::size_t>(m)] = *v;
    }
    if (!complete) {
      ++out.rows_dropped;
      continue;
    }
    coords.push_back({*sx, *sy});
    xs.insert(xs.end(), row_x.begin(), row_x.end());
    ys.insert(ys.end(), row_y.begin(), row_y.end());
    out.data.ids.push_back(id_col ? row[*id_col] : std::to_string(r));
  }
  const auto n = static_cast<Eigen::Index>(coords.size());
  if (n == 0) throw InputError("no usable rows after dropping rows with missing values");

  auto& d = out.data;
  d.coords.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.coords(i, 0) = coords[static_cast<std::size_t>(i)][0];
    d.coords(i, 1) = coords[static_cast<std::size_t>(i)][1];
  }
  d.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      xs.data(), n, p);
  d.y = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      ys.data(), n, q);
  d.x_names = x_vars;
  d.y_names = y_vars;
  d.validate();
  return out;
}

LoadedData load_csv(const std::filesystem::path& path, const Schema& schema) {
  const csv::Table table = csv::read(path);
  try {
    return load_table(table, schema);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::pair<Eigen::MatrixXd, Standardization> zscore(const Eigen::MatrixXd& block,
                                                   const std::vector<std::string>& names) {
  Standardization s;
  s.mean = block.colwise().mean().transpose();
  const Eigen::MatrixXd centered = block.rowwise() - s.mean.transpose();
  s.sd = (centered.colwise().squaredNorm() / static_cast<double>(block.rows()))
             .cwiseSqrt()
             .transpose();
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    if (!(s.sd(c) > 0.0)) {
      const std::string name = static_cast<std::size_t>(c) < names.size()
                                   ? names[static_cast<std::size_t>(c)]
                                   : "column " + std::to_string(c + 1);
      throw DegenerateError("zscore: variable '" + name + "' has zero variance");
    }
  }
  Eigen::MatrixXd out = centered * s.sd.cwiseInverse().asDiagonal();
  return {std::move(out), std::move(s)};
}

FilterResult collinearity_filter(const Eigen::MatrixXd& block,
                                 const std::vector<std::string>& names, double threshold) {
  Eigen::MatrixXd r = stats::pearson_matrix(block).cwiseAbs();
  r = r.unaryExpr([](double v) { return std::isnan(v) ? 0.0 : v; });
  const Eigen::Index m = block.cols();
  std::vector<bool> alive(static_cast<std::size_t>(m), true);
  FilterResult out;
  for (;;) {
    Eigen::Index bi = -1;
    Eigen::Index bj = -1;
    double worst = threshold;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = i + 1; j < m; ++j) {
        if (!alive[static_cast<std::size_t>(j)]) continue;
        if (r(i, j) > worst) {
          worst = r(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    auto mean_abs = [&](Eigen::Index c) {
      double sum = 0.0;
      int count = 0;
      for (Eigen::Index o = 0; o < m; ++o) {
        if (o == c || !alive[static_cast<std::size_t>(o)]) continue;
        sum += r(c, o);
        ++count;
      }
      return count ? sum / count : 0.0;
    };
    // Near-equal means count as a tie so rounding cannot pick the member.
    const double mi = mean_abs(bi);
    const double mj = mean_abs(bj);
    const Eigen::Index drop = mi > mj + 1e-12 ? bi : bj;
    alive[static_cast<std::size_t>(drop)] = false;
    out.dropped.push_back(static_cast<std::size_t>(drop) < names.size()
                              ? names[static_cast<std::size_t>(drop)]
                              : std::to_string(drop + 1));
  }
  for (Eigen::Index c = 0; c < m; ++c) {
    if (alive[static_cast<std::size_t>(c)]) out.kept.push_back(c);
  }
  return out;
}

PreprocessLog preprocess(SpatialDataset& data, const PreprocessConfig& config) {
  data.fill_default_labels();
  PreprocessLog log;
  if (config.filter) {
    const FilterResult fx = collinearity_filter(data.x, data.x_names,
                                                config.collinearity_threshold);
    const FilterResult fy = collinearity_filter(data.y, data.y_names,
                                                config.collinearity_threshold);
    data.x = select_columns(data.x, fx.kept);
    data.x_names = select_names(data.x_names, fx.kept);
    data.y = select_columns(data.y, fy.kept);
    data.y_names = select_names(data.y_names, fy.kept);
    log.dropped_x = fx.dropped;
    log.dropped_y = fy.dropped;
  }
  if (config.standardize) {
    std::tie(data.x, log.x_scale) = zscore(data.x, data.x_names);
    std::tie(data.y, log.y_scale) = zscore(data.y, data.y_names);
    log.standardized = true;
  }
  data.validate();
  return log;
}

}  // namespace gwcca

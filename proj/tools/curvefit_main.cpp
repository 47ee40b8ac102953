// curvefit command-line tool: fit, smooth, impute, stats, select, plot,
// evaluate. Exit codes: 0 success, 1 usage error, 2 data error, 3 fit did
// not converge (the result is still written).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvefit/dataset.hpp"
#include "curvefit/errors.hpp"
#include "curvefit/impute.hpp"
#include "curvefit/metrics.hpp"
#include "curvefit/models.hpp"
#include "curvefit/optimize_global.hpp"
#include "curvefit/optimize_local.hpp"
#include "curvefit/plot.hpp"
#include "curvefit/regress.hpp"
#include "curvefit/smooth.hpp"
#include "curvefit/stats.hpp"
#include "curvefit/version.hpp"

namespace {

using curvefit::Dataset;
using curvefit::format_double;
using json = nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_no_convergence = 3;

struct CommonArgs {
  std::string data;
  std::string x_col = "x";
  std::string y_col = "y";
  std::string out;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--data", args.data, "input CSV file")->required();
  cmd->add_option("--x-col", args.x_col, "abscissa column name");
  cmd->add_option("--y-col", args.y_col, "ordinate column name");
  cmd->add_option("--out", args.out, "output file (default: stdout for reports)");
  cmd->add_option("--seed", args.seed, "random seed")->envname("CURVEFIT_SEED");
}

json input_digest(const Dataset& d) {
  return json{{"rows", d.size()},
              {"missing_x", d.missing_x_count()},
              {"missing_y", d.missing_y_count()}};
}

// Canonical reproduction command: result-affecting flags only (scheduling
// knobs like --n-jobs are deliberately left out).
std::string echo_command(const std::vector<std::string>& parts) {
  std::string s;
  for (const std::string& p : parts) {
    if (!s.empty()) s += ' ';
    s += p;
  }
  return s;
}

json report(const std::string& command, const Dataset& d, json result,
            std::uint64_t seed) {
  return json{{"command", command},
              {"input", input_digest(d)},
              {"result", std::move(result)},
              {"seed", seed},
              {"version", curvefit::version}};
}

void write_report(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file || !(file << text)) {
    throw curvefit::Error(curvefit::ErrorKind::write_error, "cannot write '" + out + "'");
  }
}

json metrics_json(const curvefit::Metrics& m) {
  json j;
  j["r_squared"] = m.r_squared ? json(*m.r_squared) : json(nullptr);
  j["mse"] = m.mse;
  j["rmse"] = m.rmse;
  j["n"] = m.n;
  return j;
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(what), "cannot parse '" + token + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<std::pair<double, double>> parse_bounds(const std::string& text) {
  std::vector<std::pair<double, double>> bounds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    const std::size_t colon = token.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--bounds", "expected lo:hi, got '" + token + "'");
    }
    try {
      const double lo = std::stod(token.substr(0, colon));
      const double hi = std::stod(token.substr(colon + 1));
      if (!(lo < hi)) {
        throw CLI::ValidationError("--bounds", "need lo < hi in '" + token + "'");
      }
      bounds.emplace_back(lo, hi);
    } catch (const CLI::ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw CLI::ValidationError("--bounds", "cannot parse '" + token + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return bounds;
}

const curvefit::ModelSpec& require_model(const std::string& name) {
  const curvefit::ModelSpec* spec = curvefit::find_model(name);
  if (!spec) {
    std::string names;
    for (const std::string& n : curvefit::builtin_model_names()) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw CLI::ValidationError("--model",
                               "unknown model '" + name + "'; valid names: " + names);
  }
  return *spec;
}

// ---------------------------------------------------------------- fit ----

struct FitArgs {
  CommonArgs common;
  std::string model;
  std::string init;
  std::string method = "lm";
  bool global = false;
  std::string bounds;
  std::size_t max_iter = 100;
  std::size_t restarts = 5;
  double mutation_rate = 0.05;
  double crossover = 0.7;
  std::size_t population = 0;
  int n_jobs = -1;
};

int run_fit(const FitArgs& args) {
  const curvefit::ModelSpec& spec = require_model(args.model);
  const Dataset raw = curvefit::load_csv(args.common.data, args.common.x_col,
                                         args.common.y_col);
  const Dataset d = curvefit::complete_pairs(raw);

  std::vector<std::string> echo{"fit", "--model", args.model, "--data", args.common.data};
  if (args.common.x_col != "x") {
    echo.insert(echo.end(), {"--x-col", args.common.x_col});
  }
  if (args.common.y_col != "y") {
    echo.insert(echo.end(), {"--y-col", args.common.y_col});
  }

  curvefit::FitResult fitted;
  if (args.global) {
    curvefit::OptimizeConfig cfg;
    if (!args.bounds.empty()) {
      cfg.bounds = parse_bounds(args.bounds);
      if (cfg.bounds.size() != spec.param_count) {
        throw CLI::ValidationError("--bounds", "expected " +
                                                   std::to_string(spec.param_count) +
                                                   " lo:hi pairs");
      }
    }
    cfg.max_iter = args.max_iter;
    cfg.restarts = args.restarts;
    cfg.mutation_rate = args.mutation_rate;
    cfg.crossover = args.crossover;
    cfg.population = args.population;
    cfg.n_jobs = args.n_jobs;
    cfg.seed = args.common.seed;
    fitted = curvefit::global_fit(spec, d, cfg);

    echo.push_back("--global");
    if (!args.bounds.empty()) echo.insert(echo.end(), {"--bounds", args.bounds});
    echo.insert(echo.end(), {"--max-iter", std::to_string(args.max_iter)});
    echo.insert(echo.end(), {"--restarts", std::to_string(args.restarts)});
    echo.insert(echo.end(), {"--mutation-rate", format_double(args.mutation_rate)});
    echo.insert(echo.end(), {"--crossover", format_double(args.crossover)});
    if (args.population != 0) {
      echo.insert(echo.end(), {"--population", std::to_string(args.population)});
    }
  } else {
    curvefit::LocalConfig cfg;
    cfg.max_iter = args.max_iter;
    if (args.method == "lm") {
      cfg.method = curvefit::LocalMethod::levenberg_marquardt;
    } else if (args.method == "nm") {
      cfg.method = curvefit::LocalMethod::nelder_mead;
    } else if (args.method == "gd") {
      cfg.method = curvefit::LocalMethod::gradient_descent;
    } else {
      throw CLI::ValidationError("--method", "expected lm, nm or gd");
    }

    std::vector<double> init;
    if (!args.init.empty()) {
      init = parse_number_list(args.init, "--init");
      if (init.size() != spec.param_count) {
        throw CLI::ValidationError(
            "--init", "expected " + std::to_string(spec.param_count) + " values");
      }
    } else {
      init = curvefit::default_init(spec, d);
    }
    fitted = curvefit::fit(spec, d, init, cfg);

    if (!args.init.empty()) echo.insert(echo.end(), {"--init", args.init});
    if (args.method != "lm") echo.insert(echo.end(), {"--method", args.method});
    echo.insert(echo.end(), {"--max-iter", std::to_string(args.max_iter)});
  }
  echo.insert(echo.end(), {"--seed", std::to_string(args.common.seed)});

  const std::vector<double> predicted = curvefit::evaluate(spec, fitted.theta_hat, d.x);
  const curvefit::Metrics metrics = curvefit::model_analysis(d.y, predicted);

  json result;
  result["model"] = spec.name;
  result["method"] = fitted.method;
  result["theta"] = fitted.theta_hat;
  result["loss"] = fitted.loss;
  result["iterations"] = fitted.iterations;
  result["converged"] = fitted.converged;
  result["metrics"] = metrics_json(metrics);

  write_report(report(echo_command(echo), raw, std::move(result), args.common.seed),
               args.common.out);
  return fitted.converged ? exit_ok : exit_no_convergence;
}

// -------------------------------------------------------------- smooth ----

struct SmoothArgs {
  CommonArgs common;
  std::size_t window = 2;  // half-window w; the filter spans 2w+1 points
  std::size_t degree = 2;
};

int run_smooth(const SmoothArgs& args) {
  const Dataset d = curvefit::load_csv(args.common.data, args.common.x_col,
                                       args.common.y_col);
  if (d.has_missing()) {
    throw curvefit::Error(curvefit::ErrorKind::invalid_data,
                          "smoothing needs complete data; run impute first");
  }
  // The convolution form only holds on a uniform grid.
  bool uniform = true;
  if (d.size() > 2) {
    const double step = (d.x.back() - d.x.front()) / static_cast<double>(d.size() - 1);
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (std::abs(d.x[i] - d.x[i - 1] - step) > 1e-6 * std::max(1.0, std::abs(step))) {
        uniform = false;
        break;
      }
    }
  }
  if (!uniform) {
    std::cerr << "warning: x is not uniformly spaced; smoothing on index positions\n";
  }

  const curvefit::SGConfig cfg{args.window, args.degree};
  const std::vector<double> smoothed = curvefit::savitzky_golay(d.y, cfg);

  Dataset out = d;
  out.y = smoothed;
  const std::string path = args.common.out.empty() ? "smoothed.csv" : args.common.out;
  curvefit::write_csv(out, path);

  const std::vector<std::string> echo{
      "smooth", "--data", args.common.data, "--window", std::to_string(args.window),
      "--degree", std::to_string(args.degree), "--seed",
      std::to_string(args.common.seed)};
  json result{{"rows", out.size()},
              {"window", args.window},
              {"degree", args.degree},
              {"uniform_grid", uniform}};
  std::cout << report(echo_command(echo), d, std::move(result), args.common.seed)
                   .dump(2)
            << "\n";
  return exit_ok;
}

// -------------------------------------------------------------- impute ----

struct ImputeArgs {
  CommonArgs common;
  std::string strategy = "drop";
};

int run_impute(const ImputeArgs& args) {
  const Dataset d = curvefit::load_csv(args.common.data, args.common.x_col,
                                       args.common.y_col);
  const curvefit::ImputeStrategy strategy = curvefit::ImputeStrategy::parse(args.strategy);
  const Dataset filled = curvefit::impute(d, strategy);
  const std::string path = args.common.out.empty() ? "imputed.csv" : args.common.out;
  curvefit::write_csv(filled, path);

  const std::vector<std::string> echo{"impute", "--data", args.common.data,
                                      "--strategy", args.strategy, "--seed",
                                      std::to_string(args.common.seed)};
  json result{{"strategy", strategy.name()},
              {"rows_in", d.size()},
              {"rows_out", filled.size()},
              {"filled", d.missing_y_count() + d.missing_x_count()}};
  std::cout << report(echo_command(echo), d, std::move(result), args.common.seed)
                   .dump(2)
            << "\n";
  return exit_ok;
}

// --------------------------------------------------------------- stats ----

struct StatsArgs {
  CommonArgs common;
  std::string column = "y";
};

int run_stats(const StatsArgs& args) {
  const Dataset d = curvefit::load_csv(args.common.data, args.common.x_col,
                                       args.common.y_col);
  curvefit::SummaryStats s;
  if (args.column == "y") {
    s = curvefit::summary_statistics(d.y, d.y_present);
  } else if (args.column == "x") {
    s = curvefit::summary_statistics(d.x, d.x_present);
  } else {
    throw CLI::ValidationError("--column", "expected x or y");
  }

  json result{{"mean", s.mean},
              {"std", s.std_dev},
              {"min", s.min},
              {"max", s.max},
              {"median", s.median},
              {"count", s.count},
              {"unique_count", s.unique_count},
              {"skewness", s.skewness},
              {"excess_kurtosis", s.excess_kurtosis}};

  std::vector<std::string> echo{"stats",    "--data",  args.common.data,
                                "--column", args.column, "--seed",
                                std::to_string(args.common.seed)};
  write_report(report(echo_command(echo), d, std::move(result), args.common.seed),
               args.common.out);
  return exit_ok;
}

// -------------------------------------------------------------- select ----

struct SelectArgs {
  CommonArgs common;
  std::string candidates;
};

int run_select(const SelectArgs& args) {
  const Dataset raw = curvefit::load_csv(args.common.data, args.common.x_col,
                                         args.common.y_col);
  const Dataset d = curvefit::complete_pairs(raw);

  std::vector<std::string> names;
  if (args.candidates.empty()) {
    names = curvefit::builtin_model_names();
  } else {
    std::size_t start = 0;
    while (start <= args.candidates.size()) {
      const std::size_t comma = args.candidates.find(',', start);
      names.push_back(args.candidates.substr(
          start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  std::vector<curvefit::Candidate> candidates;
  for (const std::string& name : names) {
    if (!curvefit::find_model(name)) {
      throw CLI::ValidationError("--candidates", "unknown model '" + name + "'");
    }
    candidates.push_back(curvefit::Candidate::from_name(name));
  }

  const std::vector<curvefit::SelectionEntry> ranked =
      curvefit::select_model(d.x, d.y, candidates);

  json table = json::array();
  for (const curvefit::SelectionEntry& e : ranked) {
    json row;
    row["model_name"] = e.name;
    row["params"] = e.params;
    row["r_squared"] = e.metrics.r_squared ? json(*e.metrics.r_squared) : json(nullptr);
    row["adj_r_squared"] = e.adj_r_squared ? json(*e.adj_r_squared) : json(nullptr);
    row["mse"] = e.error.empty() ? json(e.metrics.mse) : json(nullptr);
    row["rmse"] = e.error.empty() ? json(e.metrics.rmse) : json(nullptr);
    if (!e.error.empty()) row["error"] = e.error;
    table.push_back(std::move(row));
  }

  std::vector<std::string> echo{"select", "--data", args.common.data};
  if (!args.candidates.empty()) {
    echo.insert(echo.end(), {"--candidates", args.candidates});
  }
  echo.insert(echo.end(), {"--seed", std::to_string(args.common.seed)});
  write_report(report(echo_command(echo), raw, std::move(table), args.common.seed),
               args.common.out);
  return exit_ok;
}

// ---------------------------------------------------------------- plot ----

struct PlotArgs {
  CommonArgs common;
  std::string kinds = "scatter";
  std::string column = "y";
  std::string model;  // for residuals_vs_fitted and residual qq
  std::string title;
};

std::string kind_output_path(const std::string& base, const std::string& kind,
                             bool multiple) {
  if (!multiple) return base;
  const std::filesystem::path p(base);
  std::filesystem::path withkind = p.parent_path() / p.stem();
  withkind += "." + kind;
  withkind += p.extension().empty() ? std::filesystem::path(".svg") : p.extension();
  return withkind.string();
}

int run_plot(const PlotArgs& args) {
  const Dataset raw = curvefit::load_csv(args.common.data, args.common.x_col,
                                         args.common.y_col);

  std::vector<std::string> kinds;
  std::size_t start = 0;
  while (start <= args.kinds.size()) {
    const std::size_t comma = args.kinds.find(',', start);
    kinds.push_back(
        args.kinds.substr(start, comma == std::string::npos ? comma : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }

  const std::string base = args.common.out.empty() ? "plot.svg" : args.common.out;
  for (const std::string& kind_name : kinds) {
    const curvefit::PlotKind kind = curvefit::plot_kind_from_name(kind_name);
    curvefit::PlotRequest req;
    req.kind = kind;
    req.title = args.title;
    req.output_path = kind_output_path(base, kind_name, kinds.size() > 1);

    switch (kind) {
      case curvefit::PlotKind::scatter:
      case curvefit::PlotKind::line: {
        const Dataset d = curvefit::complete_pairs(raw);
        req.x_label = d.x_name;
        req.y_label = d.y_name;
        curvefit::emit_plot_xy(req, d.x, d.y);
        break;
      }
      case curvefit::PlotKind::residuals_vs_fitted: {
        if (args.model.empty()) {
          throw CLI::ValidationError("--model", "residuals_vs_fitted needs a model");
        }
        const curvefit::ModelSpec& spec = require_model(args.model);
        const Dataset d = curvefit::complete_pairs(raw);
        const curvefit::FitResult fitted =
            curvefit::fit(spec, d, curvefit::default_init(spec, d));
        const std::vector<double> predicted =
            curvefit::evaluate(spec, fitted.theta_hat, d.x);
        const curvefit::ResidualDiagnostics diag =
            curvefit::residual_diagnostics(d.y, predicted);
        req.x_label = "fitted";
        req.y_label = "residual";
        curvefit::emit_plot_xy(req, diag.fitted, diag.residual);
        break;
      }
      case curvefit::PlotKind::qq: {
        std::vector<double> values;
        if (!args.model.empty()) {
          const curvefit::ModelSpec& spec = require_model(args.model);
          const Dataset d = curvefit::complete_pairs(raw);
          const curvefit::FitResult fitted =
              curvefit::fit(spec, d, curvefit::default_init(spec, d));
          const std::vector<double> predicted =
              curvefit::evaluate(spec, fitted.theta_hat, d.x);
          for (std::size_t i = 0; i < d.size(); ++i) {
            values.push_back(d.y[i] - predicted[i]);
          }
        } else if (args.column == "x") {
          for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw.x_present[i]) values.push_back(raw.x[i]);
          }
        } else {
          for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw.y_present[i]) values.push_back(raw.y[i]);
          }
        }
        req.x_label = "normal quantile";
        req.y_label = args.model.empty() ? args.column : "residual";
        curvefit::emit_plot_series(req, values);
        break;
      }
      case curvefit::PlotKind::histogram:
      case curvefit::PlotKind::box: {
        std::vector<double> values;
        if (args.column == "x") {
          for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw.x_present[i]) values.push_back(raw.x[i]);
          }
        } else if (args.column == "y") {
          for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw.y_present[i]) values.push_back(raw.y[i]);
          }
        } else {
          throw CLI::ValidationError("--column", "expected x or y");
        }
        req.x_label = args.column;
        req.y_label = kind == curvefit::PlotKind::histogram ? "count" : args.column;
        curvefit::emit_plot_series(req, values);
        break;
      }
    }
  }
  return exit_ok;
}

// ------------------------------------------------------------ evaluate ----

struct EvaluateArgs {
  CommonArgs common;
  std::string model;
  std::string params;
};

int run_evaluate(const EvaluateArgs& args) {
  const curvefit::ModelSpec& spec = require_model(args.model);
  const std::vector<double> theta = parse_number_list(args.params, "--params");
  if (theta.size() != spec.param_count) {
    throw CLI::ValidationError("--params", "expected " +
                                               std::to_string(spec.param_count) +
                                               " values");
  }
  const Dataset raw = curvefit::load_csv(args.common.data, args.common.x_col,
                                         args.common.y_col);
  const Dataset d = curvefit::complete_pairs(raw);
  const std::vector<double> predicted = curvefit::evaluate(spec, theta, d.x);
  const curvefit::Metrics metrics = curvefit::model_analysis(d.y, predicted);

  json result;
  result["model"] = spec.name;
  result["theta"] = theta;
  result["metrics"] = metrics_json(metrics);

  const std::vector<std::string> echo{
      "evaluate", "--model", args.model,          "--data",
      args.common.data,      "--params", args.params,
      "--seed",   std::to_string(args.common.seed)};
  write_report(report(echo_command(echo), raw, std::move(result), args.common.seed),
               args.common.out);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvefit: curve fitting and regression analysis toolkit"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a model by least squares");
  add_common(fit_cmd, fit_args.common);
  fit_cmd->add_option("--model", fit_args.model, "model family name")->required();
  fit_cmd->add_option("--init", fit_args.init,
                      "initial guess a,b,... (default: data-driven)");
  fit_cmd->add_option("--method", fit_args.method, "local method: lm, nm, gd");
  fit_cmd->add_flag("--global", fit_args.global,
                    "differential evolution over the bound box, then local polish");
  fit_cmd->add_option("--bounds", fit_args.bounds,
                      "per-parameter lo:hi pairs, comma separated (default -1e6:1e6)");
  fit_cmd->add_option("--max-iter", fit_args.max_iter,
                      "iteration / generation budget")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--restarts", fit_args.restarts, "independent DE restarts")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--mutation-rate", fit_args.mutation_rate,
                      "DE differential weight F in (0, 2]");
  fit_cmd->add_option("--crossover", fit_args.crossover, "DE crossover rate in [0, 1]");
  fit_cmd->add_option("--population", fit_args.population,
                      "DE population size (default max(15, 10 * params))");
  fit_cmd->add_option("--n-jobs", fit_args.n_jobs,
                      "parallel restarts; -1 = all threads (never changes results)");

  SmoothArgs smooth_args;
  CLI::App* smooth_cmd = app.add_subcommand("smooth", "Savitzky-Golay smoothing");
  add_common(smooth_cmd, smooth_args.common);
  smooth_cmd->add_option("--window", smooth_args.window,
                         "half-window w; the filter spans 2w+1 points")
      ->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--degree", smooth_args.degree, "local polynomial degree");

  ImputeArgs impute_args;
  CLI::App* impute_cmd = app.add_subcommand("impute", "fill or drop missing values");
  add_common(impute_cmd, impute_args.common);
  impute_cmd->add_option("--strategy", impute_args.strategy,
                         "drop, mean, median, linear, ffill, bfill, model:<name>");

  StatsArgs stats_args;
  CLI::App* stats_cmd = app.add_subcommand("stats", "summary statistics");
  add_common(stats_cmd, stats_args.common);
  stats_cmd->add_option("--column", stats_args.column, "x or y (default y)");

  SelectArgs select_args;
  CLI::App* select_cmd =
      app.add_subcommand("select", "rank candidate models by adjusted R^2");
  add_common(select_cmd, select_args.common);
  select_cmd->add_option("--candidates", select_args.candidates,
                         "comma-separated model names (default: all)");

  PlotArgs plot_args;
  CLI::App* plot_cmd = app.add_subcommand("plot", "emit SVG plots");
  add_common(plot_cmd, plot_args.common);
  plot_cmd->add_option("--kind", plot_args.kinds,
                       "scatter, line, histogram, box, qq, residuals_vs_fitted; "
                       "comma-separated for several");
  plot_cmd->add_option("--column", plot_args.column,
                       "series for one-series kinds: x or y");
  plot_cmd->add_option("--model", plot_args.model,
                       "model for residuals_vs_fitted / residual qq");
  plot_cmd->add_option("--title", plot_args.title, "plot title");

  EvaluateArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "metrics of fixed parameters against data");
  add_common(eval_cmd, eval_args.common);
  eval_cmd->add_option("--model", eval_args.model, "model family name")->required();
  eval_cmd->add_option("--params", eval_args.params, "parameter values a,b,...")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*fit_cmd) return run_fit(fit_args);
    if (*smooth_cmd) return run_smooth(smooth_args);
    if (*impute_cmd) return run_impute(impute_args);
    if (*stats_cmd) return run_stats(stats_args);
    if (*select_cmd) return run_select(select_args);
    if (*plot_cmd) return run_plot(plot_args);
    if (*eval_cmd) return run_evaluate(eval_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const curvefit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  }
  return exit_usage;
}

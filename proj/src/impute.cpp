#include "curvefit/impute.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "curvefit/errors.hpp"
#include "curvefit/optimize_local.hpp"

namespace curvefit {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Keeps rows with observed x; y stays as-is.
Dataset drop_missing_x(const Dataset& d) {
  Dataset out;
  out.x_name = d.x_name;
  out.y_name = d.y_name;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.x_present[i]) continue;
    out.x.push_back(d.x[i]);
    out.y.push_back(d.y[i]);
    out.x_present.push_back(1);
    out.y_present.push_back(d.y_present[i]);
  }
  if (out.size() == 0) {
    throw Error(ErrorKind::no_observed_values, "no row has an observed x");
  }
  return out;
}

void fill_forward(Dataset& d) {
  bool seen = false;
  double last = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.y_present[i]) {
      last = d.y[i];
      seen = true;
    } else if (seen) {
      d.y[i] = last;
      d.y_present[i] = 1;
    }
  }
  // Leading gap: backfill from the first observed value.
  double first = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.y_present[i]) {
      first = d.y[i];
      break;
    }
  }
  for (std::size_t i = 0; i < d.size() && !d.y_present[i]; ++i) {
    d.y[i] = first;
    d.y_present[i] = 1;
  }
}

void fill_backward(Dataset& d) {
  bool seen = false;
  double next = 0.0;
  for (std::size_t ii = d.size(); ii > 0; --ii) {
    const std::size_t i = ii - 1;
    if (d.y_present[i]) {
      next = d.y[i];
      seen = true;
    } else if (seen) {
      d.y[i] = next;
      d.y_present[i] = 1;
    }
  }
  double last = 0.0;
  for (std::size_t ii = d.size(); ii > 0; --ii) {
    if (d.y_present[ii - 1]) {
      last = d.y[ii - 1];
      break;
    }
  }
  for (std::size_t ii = d.size(); ii > 0 && !d.y_present[ii - 1]; --ii) {
    d.y[ii - 1] = last;
    d.y_present[ii - 1] = 1;
  }
}

void fill_interpolate(Dataset& d) {
  // Neighbors are taken in x-order; gaps beyond the first/last observed
  // point take the nearest observed value.
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.x[a] < d.x[b]; });

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    if (d.y_present[i]) continue;

    long long prev = -1;
    for (long long p = static_cast<long long>(pos) - 1; p >= 0; --p) {
      if (d.y_present[order[static_cast<std::size_t>(p)]]) {
        prev = p;
        break;
      }
    }
    long long next = -1;
    for (std::size_t p = pos + 1; p < order.size(); ++p) {
      if (d.y_present[order[p]]) {
        next = static_cast<long long>(p);
        break;
      }
    }

    double value;
    if (prev >= 0 && next >= 0) {
      const std::size_t a = order[static_cast<std::size_t>(prev)];
      const std::size_t b = order[static_cast<std::size_t>(next)];
      const double span = d.x[b] - d.x[a];
      value = span == 0.0
                  ? 0.5 * (d.y[a] + d.y[b])
                  : d.y[a] + (d.y[b] - d.y[a]) * (d.x[i] - d.x[a]) / span;
    } else if (prev >= 0) {
      value = d.y[order[static_cast<std::size_t>(prev)]];
    } else {
      value = d.y[order[static_cast<std::size_t>(next)]];
    }
    d.y[i] = value;
    // presence flags flip only after the pass, so fills never feed each other
  }
  d.y_present.assign(d.size(), 1);
}

void fill_model(Dataset& d, const ModelSpec& spec) {
  std::vector<double> cx;
  std::vector<double> cy;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.y_present[i]) {
      cx.push_back(d.x[i]);
      cy.push_back(d.y[i]);
    }
  }
  if (cx.size() < spec.param_count) {
    throw Error(ErrorKind::insufficient_data,
                "model imputation needs at least " + std::to_string(spec.param_count) +
                    " complete pairs, got " + std::to_string(cx.size()));
  }
  const Dataset training = Dataset::from_complete(std::move(cx), std::move(cy));
  const std::vector<double> init = default_init(spec, training);
  const FitResult fitted = fit(spec, training, init, LocalConfig{});
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.y_present[i]) continue;
    const std::vector<double> predicted =
        evaluate(spec, fitted.theta_hat, std::span<const double>(&d.x[i], 1));
    d.y[i] = predicted[0];
    d.y_present[i] = 1;
  }
}

}  // namespace

ImputeStrategy ImputeStrategy::parse(std::string_view name) {
  if (name == "drop") return {ImputeKind::drop, std::nullopt};
  if (name == "mean") return {ImputeKind::mean, std::nullopt};
  if (name == "median") return {ImputeKind::median, std::nullopt};
  if (name == "linear") return {ImputeKind::interpolate_linear, std::nullopt};
  if (name == "ffill") return {ImputeKind::ffill, std::nullopt};
  if (name == "bfill") return {ImputeKind::bfill, std::nullopt};
  if (name.rfind("model:", 0) == 0) {
    const std::string_view model_name = name.substr(6);
    const ModelSpec* spec = find_model(model_name);
    if (!spec) {
      throw Error(ErrorKind::invalid_config,
                  "unknown model '" + std::string(model_name) + "' in impute strategy");
    }
    return {ImputeKind::model, *spec};
  }
  throw Error(ErrorKind::invalid_config,
              "unknown impute strategy '" + std::string(name) + "'");
}

std::string ImputeStrategy::name() const {
  switch (kind) {
    case ImputeKind::drop:
      return "drop";
    case ImputeKind::mean:
      return "mean";
    case ImputeKind::median:
      return "median";
    case ImputeKind::interpolate_linear:
      return "linear";
    case ImputeKind::ffill:
      return "ffill";
    case ImputeKind::bfill:
      return "bfill";
    case ImputeKind::model:
      return "model:" + (model ? model->name : std::string("?"));
  }
  return "?";
}

Dataset impute(const Dataset& d, const ImputeStrategy& strategy) {
  if (strategy.kind == ImputeKind::drop) return complete_pairs(d);

  Dataset out = drop_missing_x(d);
  if (out.missing_y_count() == 0) return out;

  std::vector<double> observed;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.y_present[i]) observed.push_back(out.y[i]);
  }
  if (observed.empty()) {
    throw Error(ErrorKind::no_observed_values, "no observed y value to fill from");
  }

  switch (strategy.kind) {
    case ImputeKind::mean: {
      const double m = mean_of(observed);
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out.y_present[i]) {
          out.y[i] = m;
          out.y_present[i] = 1;
        }
      }
      break;
    }
    case ImputeKind::median: {
      const double m = median_of(observed);
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out.y_present[i]) {
          out.y[i] = m;
          out.y_present[i] = 1;
        }
      }
      break;
    }
    case ImputeKind::interpolate_linear:
      fill_interpolate(out);
      break;
    case ImputeKind::ffill:
      fill_forward(out);
      break;
    case ImputeKind::bfill:
      fill_backward(out);
      break;
    case ImputeKind::model:
      if (!strategy.model) {
        throw Error(ErrorKind::invalid_config, "model strategy without a model");
      }
      fill_model(out, *strategy.model);
      break;
    case ImputeKind::drop:
      break;  // handled above
  }
  return out;
}

}  // namespace curvefit

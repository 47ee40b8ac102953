#pragma once

#include <optional>
#include <string_view>

#include "curvefit/dataset.hpp"
#include "curvefit/models.hpp"

namespace curvefit {

enum class ImputeKind { drop, mean, median, interpolate_linear, ffill, bfill, model };

struct ImputeStrategy {
  ImputeKind kind = ImputeKind::drop;
  std::optional<ModelSpec> model;  // required for ImputeKind::model

  // Accepts "drop", "mean", "median", "linear", "ffill", "bfill" and
  // "model:<model-name>".
  static ImputeStrategy parse(std::string_view name);
  std::string name() const;
};

// Fills (or drops) missing entries. Rows with missing x are dropped by every
// strategy except drop, which removes any incomplete row; missing y is then
// filled per strategy. Present values are never modified and the output has
// no missing entries.
Dataset impute(const Dataset& d, const ImputeStrategy& strategy);

}  // namespace curvefit

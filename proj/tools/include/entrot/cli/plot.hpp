#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entrot/annealing.hpp"
#include "entrot/gaussian.hpp"
#include "entrot/sinkhorn.hpp"

namespace entrot::cli {

/// Plot-ready series. Every variant carries log_ratio = log(y_{t+1} / y_t),
/// NaN where undefined, and is header-only for an empty input.

/// t, delta, envelope, log_ratio; the envelope (1 - 1/alpha)^t delta_0 is NaN
/// when no alpha is supplied.
std::string emit_plot_data(const std::vector<TraceRow>& rows, std::optional<double> alpha = std::nullopt);

/// t, delta, lower_bound, lower_bound_simple, log_ratio.
std::string emit_plot_data(const std::vector<GaussianRow>& rows);

/// t, lambda, eta, eta_plus_lambda_bound, log_ratio: measured eta against the
/// running envelope eta_1 + sum_{s <= t} lambda_s of the weak recursion.
std::string emit_plot_data(const std::vector<AnnealedRow>& rows);

}  // namespace entrot::cli

#include "entrot/cli/plot.hpp"

#include <cmath>

#include "entrot/cli/io.hpp"

namespace entrot::cli {

namespace {

double log_ratio(double next, double cur) {
  if (!(cur > 0.0) || !(next > 0.0)) return std::nan("");
  return std::log(next / cur);
}

}  // namespace

std::string emit_plot_data(const std::vector<TraceRow>& rows, std::optional<double> alpha) {
  Table t({"t", "delta", "envelope", "log_ratio"});
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double env = alpha ? std::pow(1.0 - 1.0 / *alpha, static_cast<double>(rows[k].t)) * rows[0].delta : std::nan("");
    const double lr = k + 1 < rows.size() ? log_ratio(rows[k + 1].delta, rows[k].delta) : std::nan("");
    t.add({static_cast<double>(rows[k].t), rows[k].delta, env, lr});
  }
  return t.csv();
}

std::string emit_plot_data(const std::vector<GaussianRow>& rows) {
  Table t({"t", "delta", "lower_bound", "lower_bound_simple", "log_ratio"});
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double lr = k + 1 < rows.size() ? log_ratio(rows[k + 1].delta, rows[k].delta) : std::nan("");
    t.add({static_cast<double>(rows[k].t), rows[k].delta, rows[k].lower_bound, rows[k].lower_bound_simple, lr});
  }
  return t.csv();
}

std::string emit_plot_data(const std::vector<AnnealedRow>& rows) {
  Table t({"t", "lambda", "eta", "eta_plus_lambda_bound", "log_ratio"});
  double env = rows.empty() ? 0.0 : rows[0].eta;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k > 0) env += rows[k].lambda;
    const double lr = k + 1 < rows.size() ? log_ratio(rows[k + 1].eta, rows[k].eta) : std::nan("");
    t.add({static_cast<double>(rows[k].t), rows[k].lambda, rows[k].eta, env, lr});
  }
  return t.csv();
}

}  // namespace entrot::cli

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "kschur/harness.hpp"

namespace kschur {

std::string to_string(Method method) {
  switch (method) {
    case Method::Dmd: return "dmd";
    case Method::Edmd: return "edmd";
    case Method::KsSsmd: return "ks_ssmd";
    case Method::KsEssmd: return "ks_essmd";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (name == to_string(m)) return m;
  }
  fail(ErrorCode::BadParams, "unknown method '" + std::string(name) + "'");
}

std::vector<Method> all_methods() { return {Method::Dmd, Method::Edmd, Method::KsSsmd, Method::KsEssmd}; }

bool is_schur_method(Method method) { return method == Method::KsSsmd || method == Method::KsEssmd; }

bool uses_kernel(Method method) { return method == Method::Edmd || method == Method::KsEssmd; }

void validate(const ExperimentConfig& config) {
  if (config.window < 2) fail(ErrorCode::BadParams, "window width must be at least 2");
  if (config.horizon < 0) fail(ErrorCode::BadParams, "horizon must be non-negative");
  if (config.steps < 1) fail(ErrorCode::BadParams, "steps must be at least 1");
  if (config.methods.empty()) fail(ErrorCode::BadParams, "no methods selected");
  std::set<Method> seen(config.methods.begin(), config.methods.end());
  if (seen.size() != config.methods.size()) fail(ErrorCode::BadParams, "methods listed twice");
  validate(config.kernel);
  if (config.truncation_tol && !(*config.truncation_tol > 0.0 && *config.truncation_tol < 1.0)) {
    fail(ErrorCode::BadParams, "truncation tolerance must lie in (0, 1)");
  }
}

namespace {

std::vector<std::optional<double>> score_forecast(const Matrix& predictions, const Matrix& truth, Index horizon) {
  std::vector<std::optional<double>> out(static_cast<std::size_t>(horizon));
  for (Index k = 0; k < horizon && k < truth.cols(); ++k) {
    const double err = (predictions.col(k) - truth.col(k)).norm();
    const double scale = truth.col(k).norm();
    out[static_cast<std::size_t>(k)] = scale > 0.0 ? err / scale : err;
  }
  return out;
}

}  // namespace

KsOptions ks_options(Method method, const ExperimentConfig& config) {
  if (!is_schur_method(method)) fail(ErrorCode::BadParams, to_string(method) + " is not a Schur method");
  KsOptions opts;
  opts.dictionary = method == Method::KsSsmd ? Dictionary::Explicit : Dictionary::Kernel;
  opts.kernel = method == Method::KsSsmd ? KernelSpec::linear() : config.kernel;
  opts.truncation_tol = config.truncation_tol;
  opts.schur = config.schur;
  opts.spurious_threshold = config.spurious_threshold;
  return opts;
}

MethodFit fit_method(const SnapshotPairs& data, Method method, const ExperimentConfig& config, const Matrix& truth,
                     Index horizon) {
  MethodFit fit;
  MethodMetrics& mm = fit.metrics;
  mm.method = method;
  validate(data);
  const Vector origin = data.x.col(data.count() - 1);
  if (is_schur_method(method)) {
    const KoopmanSchurModel& model = fit.ks.emplace(build_ks_model(data, ks_options(method, config)));
    mm.rank = model.rank();
    mm.eigenvalues = model.schur.eigenvalues;
    mm.max_reconstruction_error = reconstruct_snapshots(model, data.x).max_error;
    const RealVector res = consistency_residuals(model);
    const double worst = res.size() > 0 ? res.maxCoeff() : 0.0;
    mm.max_consistency_residual = worst;
    mm.relative_consistency_residual = worst / model.svd.sigma(0);
    mm.forecast_errors = score_forecast(forecast(model, origin, horizon), truth, horizon);
    mm.condition = {model.kappa_psi_x(), condition_number(model.schur.q())};
  } else {
    const DiagVariant variant = method == Method::Dmd ? DiagVariant::Dmd : DiagVariant::Edmd;
    const KernelSpec kernel = method == Method::Dmd ? KernelSpec::linear() : config.kernel;
    const DiagonalizationModel& model =
        fit.diag.emplace(build_diag_model(data, kernel, config.truncation_tol, variant));
    mm.rank = model.rank();
    mm.eigenvalues = model.eigenvalues;
    mm.max_reconstruction_error = reconstruct_snapshots(model, data.x).max_error;
    mm.forecast_errors = score_forecast(forecast(model, origin, horizon), truth, horizon);
    mm.condition = {model.kappa_psi_x(), model.eigvec_condition};
  }
  return fit;
}

MethodMetrics evaluate_method(const SnapshotPairs& data, Method method, const ExperimentConfig& config,
                              const Matrix& truth, Index horizon) {
  try {
    return fit_method(data, method, config, truth, horizon).metrics;
  } catch (const Error& e) {
    MethodMetrics mm;
    mm.method = method;
    mm.ok = false;
    mm.error_code = std::string(to_string(e.code()));
    mm.message = e.what();
    return mm;
  }
}

std::vector<WindowMetrics> run_sliding_windows(const Matrix& trajectory, const ExperimentConfig& config) {
  validate(config);
  require_finite(trajectory, "trajectory");
  const Index total = trajectory.cols();
  const Index w = config.window;
  if (total < w + config.steps) {
    fail(ErrorCode::InsufficientData, "trajectory has " + std::to_string(total) + " snapshots; " +
                                          std::to_string(config.steps) + " steps of width " + std::to_string(w) +
                                          " need " + std::to_string(w + config.steps));
  }

  std::vector<WindowMetrics> out(static_cast<std::size_t>(config.steps));
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (Index s = next++; s < config.steps; s = next++) {
      try {
        const SnapshotPairs data{trajectory.middleCols(s, w), trajectory.middleCols(s + 1, w), 1.0};
        const Index first_truth = s + w;  // state after the last X column
        const Index available = std::clamp<Index>(total - first_truth, 0, config.horizon);
        const Matrix truth = trajectory.middleCols(first_truth, available);
        WindowMetrics wm;
        wm.step = s + 1;
        for (Method m : config.methods) wm.per_method.push_back(evaluate_method(data, m, config, truth, config.horizon));
        out[static_cast<std::size_t>(s)] = std::move(wm);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.steps;
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::clamp<Index>(static_cast<Index>(config.threads), 1, config.steps));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace kschur

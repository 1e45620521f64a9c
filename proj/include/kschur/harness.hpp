#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kschur/koopman.hpp"

namespace kschur {

enum class Method { Dmd, Edmd, KsSsmd, KsEssmd };

std::string to_string(Method method);
Method parse_method(std::string_view name);
std::vector<Method> all_methods();
bool is_schur_method(Method method);
bool uses_kernel(Method method);

enum class SyntheticKind { LinearSpectrum, JordanBlock, Rotation, StuartLandau };
enum class Similarity { Identity, Orthogonal, General };

struct SyntheticParams {
  SyntheticKind kind = SyntheticKind::Rotation;
  Index m_total = 100;
  std::uint64_t seed = 0;
  std::optional<Vector> initial;
  double noise = 0.0;  // std. dev. of additive white noise on the samples

  // linear_spectrum
  std::vector<Complex> spectrum;
  Similarity similarity = Similarity::Identity;
  // jordan_block
  Index size = 10;
  Complex eigenvalue = 1.0;
  // rotation
  double angle = 0.3;
  // stuart_landau_like: r' = rate r (1 - r^2 / radius^2), theta' = omega
  double radius = 1.0;
  double omega = 1.0;
  double rate = 1.0;
  double dt = 0.1;
  Index substeps = 10;
};

std::string to_string(SyntheticKind kind);

// Trajectory with m_total + 1 columns.
Matrix generate_synthetic(const SyntheticParams& params);

// The generating matrix of a linear kind.
Matrix synthetic_generator(const SyntheticParams& params);

// "synth:KIND[:key=value,...]".
bool is_synthetic_spec(std::string_view text);
SyntheticParams parse_synthetic_spec(std::string_view text);

enum class SnapshotFormat { Csv, RawF64 };

RealMatrix load_snapshots(const std::filesystem::path& path, SnapshotFormat format);
void save_snapshots(const std::filesystem::path& path, const RealMatrix& trajectory, SnapshotFormat format);

struct ExperimentConfig {
  Index window = 100;
  Index horizon = 40;
  Index steps = 100;
  KernelSpec kernel;
  std::optional<double> truncation_tol;
  std::vector<Method> methods = all_methods();
  std::uint64_t seed = 0;
  std::optional<double> spurious_threshold;
  SchurPreference schur = SchurPreference::Auto;
  unsigned threads = 1;
};

void validate(const ExperimentConfig& config);

struct ConditionNumbers {
  double kappa_psi_x = 1.0;
  double kappa_eigvec = 1.0;  // basis condition for Schur methods
};

struct MethodMetrics {
  Method method = Method::KsSsmd;
  bool ok = true;
  std::string error_code;  // set when !ok
  std::string message;
  Index rank = 0;
  std::vector<Complex> eigenvalues;
  double max_reconstruction_error = 0.0;
  std::optional<double> max_consistency_residual;       // Schur methods
  std::optional<double> relative_consistency_residual;  // divided by sigma_1
  std::vector<std::optional<double>> forecast_errors;   // absent past the data
  ConditionNumbers condition;
};

struct WindowMetrics {
  Index step = 1;  // 1-based
  std::vector<MethodMetrics> per_method;
};

// A fitted method with its scores; exactly one of ks / diag is set.
struct MethodFit {
  MethodMetrics metrics;
  std::optional<KoopmanSchurModel> ks;
  std::optional<DiagonalizationModel> diag;
};

// Options used for a Schur method under config.
KsOptions ks_options(Method method, const ExperimentConfig& config);

// Like evaluate_method but throws on model failure.
MethodFit fit_method(const SnapshotPairs& data, Method method, const ExperimentConfig& config, const Matrix& truth,
                     Index horizon);

// Fits one method on data and scores it; failures are recorded, not thrown. truth holds the states following the
// last column of data.x (truth.col(k) is the target at lead k + 1); leads
// beyond truth.cols() up to horizon are marked absent.
MethodMetrics evaluate_method(const SnapshotPairs& data, Method method, const ExperimentConfig& config,
                              const Matrix& truth, Index horizon);

std::vector<WindowMetrics> run_sliding_windows(const Matrix& trajectory, const ExperimentConfig& config);

enum class MetricsFormat { Json, Csv };

void save_metrics(const std::vector<WindowMetrics>& metrics, const std::filesystem::path& path,
                  MetricsFormat format);
std::vector<WindowMetrics> load_metrics_json(const std::filesystem::path& path);

// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace kschur

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace scalinglab::linear {

/// Distributional assumptions for the teacher, the label noise, and the
/// test point. The teacher w has iid N(0, teacher_scale^2) coordinates and
/// the noise iid N(0, noise_scale^2) coordinates, drawn independently.
struct PriorSpec {
    double teacher_scale = 1.0;  // s_w
    double noise_scale = 1.0;    // s_eps

    enum class XMode { Fixed, IsotropicAverage };
    XMode x_mode = XMode::IsotropicAverage;
    Eigen::VectorXd x_fixed;  // test point when x_mode == Fixed
};

/// A sampled regression problem Y = X w + noise together with the cached
/// SVD of X. The flow solution and all error decompositions are evaluated
/// through the SVD (diagonal exponentials), never by matrix series.
struct StudentTeacherInstance {
    Eigen::MatrixXd X;      // n x m
    Eigen::VectorXd w;      // m, hidden teacher
    Eigen::VectorXd noise;  // n
    Eigen::VectorXd Y;      // n, equals X w + noise
    double eta = 1.0;

    Eigen::MatrixXd U;      // n x n
    Eigen::VectorXd sigma;  // min(n, m), nonincreasing
    Eigen::MatrixXd V;      // m x m

    int n() const { return static_cast<int>(X.rows()); }
    int m() const { return static_cast<int>(X.cols()); }

    /// Singular values at or below this are treated as exact zeros
    /// (minimum-norm / pseudoinverse convention).
    double rank_tol() const;
};

/// n x m matrix of iid standard normal entries; the design-matrix sampler
/// shared by make_instance and the Monte-Carlo estimator.
Eigen::MatrixXd sample_design(int n, int m, std::uint64_t seed);

/// Fresh instance: X ~ sample_design(seed stream 0), w and noise per the
/// prior (streams 1 and 2). Deterministic given (n, m, prior scales, seed).
StudentTeacherInstance make_instance(int n, int m, const PriorSpec& prior, double eta,
                                     std::uint64_t seed);

/// Instance with explicitly given parts; Y is assembled as X w + noise.
StudentTeacherInstance instance_from_parts(Eigen::MatrixXd X, Eigen::VectorXd w,
                                           Eigen::VectorXd noise, double eta);

/// Parameters after t time of gradient flow on 1/2 ||X theta - Y||^2 from
/// theta = 0, evaluated through the SVD; components along zero singular
/// directions stay zero. Throws std::domain_error for t < 0.
Eigen::VectorXd theta_at(const StudentTeacherInstance& inst, double t);

/// x^T theta_t - x^T w: the signed prediction error at a test point.
double prediction_error_at(const StudentTeacherInstance& inst, const Eigen::VectorXd& x, double t);

/// Per-mode signal/noise coefficients of the prediction error expansion:
///   error(t) = sum_i S_i e^{-eta sigma_i^2 t} + N_i (1 - e^{-eta sigma_i^2 t}) / sigma_i
/// with S_i = -(x^T V)_i (V^T w)_i and N_i = (x^T V)_i (U^T noise)_i, and the
/// convention that the noise factor is 0 where sigma_i is 0.
struct SignalNoiseCoeffs {
    Eigen::VectorXd x;
    Eigen::VectorXd signal;     // S, length m
    Eigen::VectorXd noise;      // N, length m (0 where sigma is 0)
    Eigen::VectorXd sigma_ext;  // length m, zero-extended singular values
};

SignalNoiseCoeffs signal_noise_coeffs(const StudentTeacherInstance& inst, const Eigen::VectorXd& x);

/// The expansion above evaluated at time t; must agree with the direct
/// prediction_error_at path to high accuracy.
double expansion_error_at(const SignalNoiseCoeffs& coeffs, double eta, double t);

struct ErrorTriple {
    double total = 0.0;
    double signal_sq = 0.0;
    double noise_sq = 0.0;
};

/// Expected squared prediction error under the priors, split into the
/// signal (teacher recovery) and noise (noise amplification) terms:
///   signal = s_w^2   sum_i xv_sq_i e^{-2 eta sigma_i^2 t}
///   noise  = s_eps^2 sum_{sigma_i > 0} xv_sq_i (1 - e^{-eta sigma_i^2 t})^2 / sigma_i^2.
/// Pass xv_sq = (x^T V)_i^2 for a fixed test point or all-ones for the
/// isotropic average.
ErrorTriple expected_error_closed_form(const Eigen::VectorXd& sigma_ext,
                                       const Eigen::VectorXd& xv_sq, const PriorSpec& prior,
                                       double eta, double t);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
};

/// Monte-Carlo oracle for the expected squared prediction error: X is fixed
/// per seed (identical to make_instance's X for the same seed) and (w, noise)
/// are redrawn per sample, plus a fresh test point per sample in
/// IsotropicAverage mode. Errors are computed along the direct path.
MonteCarloEstimate expected_error_monte_carlo(int n, int m, const PriorSpec& prior, double eta,
                                              double t, int draws, std::uint64_t seed);

/// The unified scaling law: the closed-form error with training progress
/// p * t in place of t. Multiplying scale by a factor is equivalent to
/// multiplying time by the same factor; the result depends only on the
/// product. Throws std::domain_error for nonpositive scale.
ErrorTriple unified_error(const Eigen::VectorXd& sigma_ext, const Eigen::VectorXd& xv_sq,
                          const PriorSpec& prior, double eta, double scale, double t);

enum class Axis { Time, Scale, Data };

/// A sampled error trajectory along one axis with its signal/noise split.
/// total = signal + noise holds pointwise.
struct ErrorCurve {
    Axis axis = Axis::Time;
    std::vector<double> grid;
    std::vector<double> total_sq_error;
    std::vector<double> signal_sq;
    std::vector<double> noise_sq;
    std::map<std::string, std::string> metadata;
};

/// Where scan spectra come from: an explicit singular value list (zero
/// extended to length m) or designs sampled per seed.
struct SpectrumSource {
    std::vector<double> explicit_sigma;
    std::vector<std::uint64_t> seeds = {101, 102, 103, 104, 105};
};

struct ScanConfig {
    Axis axis = Axis::Time;
    std::vector<double> grid;  // times, scales, or data volumes
    int n = 0;
    int m = 0;
    PriorSpec prior;
    double eta = 1.0;
    double scale = 1.0;  // fixed p for Time/Data scans
    double time = 1.0;   // fixed t for Scale/Data scans
    SpectrumSource spectrum;
};

/// Error curve along the requested axis. Time and Scale sweeps evaluate the
/// unified law on a fixed spectrum (averaged over spectrum seeds when
/// sampled); Data sweeps draw a fresh design per grid entry and seed and
/// evaluate at the fixed (scale, time).
ErrorCurve scan_curve(const ScanConfig& config);

/// theta_t sampled on a grid for two-parameter instances, for parameter
/// plane trajectory plots. Throws std::invalid_argument unless m == 2.
std::vector<Eigen::Vector2d> trajectory_2d(const StudentTeacherInstance& inst,
                                           const std::vector<double>& t_grid);

/// Zero-extended singular values of an instance (length m).
Eigen::VectorXd sigma_extended(const StudentTeacherInstance& inst);

}  // namespace scalinglab::linear

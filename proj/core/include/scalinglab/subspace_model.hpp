#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scalinglab/scale_time.hpp"

namespace scalinglab::subspace {

/// Initialization of the controllable parameters theta.
struct ThetaInit {
    enum class Kind { Zero, UnitGaussian };
    Kind kind = Kind::Zero;
    std::uint64_t seed = 0;  // stream for UnitGaussian

    static ThetaInit zero() { return {}; }
    static ThetaInit unit_gaussian(std::uint64_t seed) {
        return {Kind::UnitGaussian, seed};
    }
};

/// A large ambient model whose behaviour depends only on a fixed
/// low-dimensional projection, trained through a random controllable
/// subspace:
///
///   alpha = K (R theta + beta0),   K: r x P fixed,   R: P x p random.
struct SubspaceSpec {
    int ambient_dim = 0;       // P
    int projection_dim = 0;    // r
    int controllable_dim = 0;  // p
    double learning_rate = 0;  // eta
    Eigen::MatrixXd projection;  // K, r x P, full row rank
    Eigen::VectorXd beta0;       // P
    ThetaInit theta_init;

    /// Throws std::invalid_argument on inconsistent dimensions, nonpositive
    /// learning rate, or rank-deficient K. With `for_theorem` set, also
    /// enforces r < p < P and zero initialization.
    void validate(bool for_theorem = false) const;
};

struct EmbeddingMatrix {
    Eigen::MatrixXd R;  // P x p, iid standard normal entries
    std::uint64_t seed = 0;
};

struct QuadraticLoss {
    Eigen::VectorXd target;  // length r
};

/// Loss over the projected coordinates. The quadratic family
/// L(a) = ||a - target||^2 (gradient 2(a - target)) is the one implemented;
/// the struct is the extension point for further families.
///
/// `lipschitz_l` bounds ||grad L|| and `lipschitz_h` the Lipschitz constant
/// of grad L over the evaluation region. Quadratics are not globally
/// Lipschitz, so `lipschitz_l` is region-dependent; see lipschitz_over_box.
struct LossSpec {
    QuadraticLoss quadratic;
    double lipschitz_l = 0.0;
    double lipschitz_h = 2.0;

    Eigen::VectorXd gradient(const Eigen::VectorXd& alpha) const {
        return 2.0 * (alpha - quadratic.target);
    }
    double value(const Eigen::VectorXd& alpha) const {
        return (alpha - quadratic.target).squaredNorm();
    }
};

/// States of a projected flow on a fixed-step time grid starting at 0.
struct FlowTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    double step_size = 0.0;
};

/// Axis-aligned bounding box in the projected space.
struct Box {
    Eigen::VectorXd lo, hi;

    /// Box with per-coordinate halfwidth scaled by (1 + factor) about the center.
    Box inflated(double factor) const;
    /// Largest Euclidean distance from `point` to any corner of the box.
    double max_distance_to(const Eigen::VectorXd& point) const;
};

Box bounding_box(const std::vector<Eigen::VectorXd>& states);

/// (l, h) for the quadratic loss over a box: the maximum gradient norm and
/// the Hessian operator norm (constant 2).
std::pair<double, double> lipschitz_over_box(const LossSpec& loss, const Box& box);

/// P x p matrix of iid standard normals; bit-identical for identical
/// (dimensions, seed).
EmbeddingMatrix sample_embedding(const SubspaceSpec& spec, std::uint64_t seed);

/// Explicit fixed-step Euler integration of the controlled flow
///   theta' = -eta R^T K^T grad L(alpha),  alpha = K (R theta + beta0),
/// tracked in the projected coordinates (alpha' = -eta KRR^TK^T grad L).
/// Throws DivergenceError naming the failing time on non-finite states.
FlowTrajectory integrate_controlled_flow(const SubspaceSpec& spec, const EmbeddingMatrix& embedding,
                                         const LossSpec& loss, double horizon, double dt);

/// Fixed-step Euler integration of the scale-free reference flow
///   A' = -eta K K^T grad L(A),  A(0) = K beta0,
/// which does not depend on the controllable dimension or the embedding.
FlowTrajectory integrate_reference_flow(const SubspaceSpec& spec, const LossSpec& loss,
                                        double horizon_s, double dt);

/// Per-time deviations ||alpha_t - A_{p t}||, reading A at rescaled times by
/// linear interpolation on the reference grid. Throws CoverageError when the
/// reference horizon is shorter than p * max(alpha.times).
std::vector<std::pair<double, double>> deviation_curve(const FlowTrajectory& alpha,
                                                       const FlowTrajectory& reference, int p);

/// High-probability deviation bound
///   l * sqrt(||K||_F^4 + ||KK^T||_F^2) / (h * sqrt(p eps) * ||KK^T||_2)
///     * (exp(eta p t h ||KK^T||_2) - 1).
/// Throws std::domain_error when h == 0 or K K^T is singular.
double theorem1_bound(const Eigen::MatrixXd& K, double l, double h, double eta, int p, double t,
                      double failure_prob);

struct TrialRecord {
    int index = 0;
    std::uint64_t seed = 0;
    double max_deviation = 0.0;
    double max_bound_ratio = 0.0;  // deviation / bound, maximized over the grid
    bool violated = false;
    bool diverged = false;
    std::string note;
};

struct ViolationReport {
    double rate = 0.0;
    int trials = 0;
    int violations = 0;
    std::vector<TrialRecord> records;
    // Region and constants the bound was evaluated with.
    Box loss_box;
    double lipschitz_l = 0.0;
    double lipschitz_h = 0.0;
    double opnorm_kkt = 0.0;
};

/// Monte-Carlo check of the deviation bound: the fraction of independent
/// embeddings for which some grid time has deviation exceeding the bound.
/// l and h are measured over the bounding box of the reference trajectory
/// inflated by 50% (the bound is only claimed along trajectories); the box
/// used is reported. Requires zero theta initialization. Diverged trials are
/// recorded as violations rather than aborting the estimate.
ViolationReport bound_violation_rate(const SubspaceSpec& spec, const LossSpec& loss, double horizon,
                                     double dt, int trials, double failure_prob,
                                     std::uint64_t master_seed);

struct NoiseStats {
    double empirical_mean_frob_sq = 0.0;
    double analytic = 0.0;
};

/// Mean squared Frobenius norm of N = K R R^T K^T - p K K^T over fresh
/// embeddings, next to the analytic expectation p (||K||_F^4 + ||KK^T||_F^2).
NoiseStats noise_matrix_stats(const Eigen::MatrixXd& K, int p, int trials, std::uint64_t seed);

/// Step size keeping explicit Euler well inside its stability region:
/// safety / (eta * p * h * ||KK^T||_2), with safety <= 0.1.
double stable_dt(double eta, int p, double lipschitz_h, double opnorm_kkt, double safety = 0.1);

/// Rough first-order global error estimate for an Euler trajectory of a
/// contracting linear flow with rate lambda_max and initial distance `dist`
/// from its fixed point. Intended for convergence checks, not guarantees.
double euler_tolerance(double dt, double lambda_max, double dist);

struct TradeoffExperimentConfig {
    int ambient_dim = 1000;
    int projection_dim = 3;
    double learning_rate = 1e-6;
    std::vector<int> p_grid;
    std::vector<double> loss_thresholds;
    bool thresholds_relative = false;  // thresholds as fractions of the initial loss
    int trials = 5;
    long max_iters = 200000;
    std::uint64_t master_seed = 0;
};

/// Gradient-descent iterations until the loss first reaches each threshold.
/// `gram` is (KR)(KR)^T so one iteration is alpha <- alpha - lr*gram*grad.
/// nullopt marks thresholds not reached within max_iters.
std::vector<std::optional<long>> gd_iterations_to_thresholds(const Eigen::MatrixXd& gram,
                                                             const Eigen::VectorXd& alpha0,
                                                             const Eigen::VectorXd& target, double lr,
                                                             const std::vector<double>& thresholds,
                                                             long max_iters);

/// The linear scale/time tradeoff experiment: for every controllable
/// dimension in p_grid, the minimum iteration count reaching each loss
/// threshold, averaged over trials. K, R, beta0, the target and theta are
/// all sampled from unit Gaussians; K, beta0 and the target are shared
/// across p within a trial so curves compare like against like.
std::vector<scale_time::TradeoffCurve> linear_tradeoff_experiment(
    const TradeoffExperimentConfig& config);

}  // namespace scalinglab::subspace

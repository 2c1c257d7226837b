#include "scalinglab/subspace_model.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scalinglab/errors.hpp"
#include "scalinglab/rng.hpp"

namespace scalinglab::subspace {

namespace {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    // Row-major fill order so the draw sequence is part of the contract.
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = rng.gaussian();
        }
    }
    return m;
}

double operator_norm(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

void SubspaceSpec::validate(bool for_theorem) const {
    if (ambient_dim < 1 || projection_dim < 1 || controllable_dim < 1) {
        throw std::invalid_argument("SubspaceSpec: dimensions must be positive");
    }
    if (!(learning_rate > 0)) {
        throw std::invalid_argument("SubspaceSpec: learning rate must be positive");
    }
    if (projection.rows() != projection_dim || projection.cols() != ambient_dim) {
        throw std::invalid_argument("SubspaceSpec: projection must be r x P");
    }
    if (beta0.size() != ambient_dim) {
        throw std::invalid_argument("SubspaceSpec: beta0 must have length P");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(projection);
    if (svd.singularValues()(projection_dim - 1) <= 1e-12) {
        throw std::invalid_argument("SubspaceSpec: projection is rank deficient");
    }
    if (for_theorem) {
        if (!(projection_dim < controllable_dim && controllable_dim < ambient_dim)) {
            throw std::invalid_argument("SubspaceSpec: theorem setting requires r < p < P");
        }
        if (theta_init.kind != ThetaInit::Kind::Zero) {
            throw std::invalid_argument("SubspaceSpec: theorem setting requires zero theta init");
        }
    }
}

Box bounding_box(const std::vector<Eigen::VectorXd>& states) {
    if (states.empty()) throw std::invalid_argument("bounding_box: no states");
    Box box{states.front(), states.front()};
    for (const auto& s : states) {
        box.lo = box.lo.cwiseMin(s);
        box.hi = box.hi.cwiseMax(s);
    }
    return box;
}

Box Box::inflated(double factor) const {
    const Eigen::VectorXd center = 0.5 * (lo + hi);
    const Eigen::VectorXd half = (1.0 + factor) * 0.5 * (hi - lo);
    return Box{center - half, center + half};
}

double Box::max_distance_to(const Eigen::VectorXd& point) const {
    double sq = 0.0;
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        const double d = std::max(std::abs(lo(i) - point(i)), std::abs(hi(i) - point(i)));
        sq += d * d;
    }
    return std::sqrt(sq);
}

std::pair<double, double> lipschitz_over_box(const LossSpec& loss, const Box& box) {
    // grad L(a) = 2(a - target): the gradient norm peaks at the corner
    // farthest from the target, and the Hessian is 2I everywhere.
    const double l = 2.0 * box.max_distance_to(loss.quadratic.target);
    const double h = 2.0;
    return {l, h};
}

EmbeddingMatrix sample_embedding(const SubspaceSpec& spec, std::uint64_t seed) {
    if (spec.ambient_dim < 1 || spec.controllable_dim < 1) {
        throw std::invalid_argument("sample_embedding: dimensions must be positive");
    }
    return EmbeddingMatrix{gaussian_matrix(spec.ambient_dim, spec.controllable_dim, seed), seed};
}

namespace {

// Shared Euler driver for flows alpha' = -eta * G * grad L(alpha).
FlowTrajectory integrate_projected(const Eigen::MatrixXd& gram, const Eigen::VectorXd& alpha0,
                                   const LossSpec& loss, double eta, double horizon, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("integrate: dt must be positive");
    if (horizon < 0) throw std::invalid_argument("integrate: horizon must be nonnegative");

    const long steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
    FlowTrajectory out;
    out.step_size = dt;
    out.times.reserve(steps + 1);
    out.states.reserve(steps + 1);

    Eigen::VectorXd alpha = alpha0;
    out.times.push_back(0.0);
    out.states.push_back(alpha);
    for (long k = 0; k < steps; ++k) {
        alpha -= (dt * eta) * (gram * loss.gradient(alpha));
        const double t = static_cast<double>(k + 1) * dt;
        if (!all_finite(alpha)) {
            std::ostringstream msg;
            msg << "flow diverged (non-finite state) at t=" << t;
            throw DivergenceError(msg.str(), t);
        }
        out.times.push_back(t);
        out.states.push_back(alpha);
    }
    return out;
}

Eigen::VectorXd initial_alpha(const SubspaceSpec& spec, const Eigen::MatrixXd& projected_embedding) {
    Eigen::VectorXd alpha0 = spec.projection * spec.beta0;
    if (spec.theta_init.kind == ThetaInit::Kind::UnitGaussian) {
        Rng rng(spec.theta_init.seed);
        Eigen::VectorXd theta0(spec.controllable_dim);
        for (int i = 0; i < spec.controllable_dim; ++i) theta0(i) = rng.gaussian();
        alpha0 += projected_embedding * theta0;
    }
    return alpha0;
}

}  // namespace

FlowTrajectory integrate_controlled_flow(const SubspaceSpec& spec, const EmbeddingMatrix& embedding,
                                         const LossSpec& loss, double horizon, double dt) {
    spec.validate();
    if (embedding.R.rows() != spec.ambient_dim || embedding.R.cols() != spec.controllable_dim) {
        throw std::invalid_argument("integrate_controlled_flow: embedding must be P x p");
    }
    // The projection theta -> alpha is linear, so Euler steps on theta map
    // exactly to Euler steps on alpha with Gram matrix (KR)(KR)^T.
    const Eigen::MatrixXd m = spec.projection * embedding.R;  // r x p
    const Eigen::MatrixXd gram = m * m.transpose();           // KRR^TK^T
    return integrate_projected(gram, initial_alpha(spec, m), loss, spec.learning_rate, horizon, dt);
}

FlowTrajectory integrate_reference_flow(const SubspaceSpec& spec, const LossSpec& loss,
                                        double horizon_s, double dt) {
    spec.validate();
    const Eigen::MatrixXd gram = spec.projection * spec.projection.transpose();  // K K^T
    const Eigen::VectorXd a0 = spec.projection * spec.beta0;
    return integrate_projected(gram, a0, loss, spec.learning_rate, horizon_s, dt);
}

std::vector<std::pair<double, double>> deviation_curve(const FlowTrajectory& alpha,
                                                       const FlowTrajectory& reference, int p) {
    if (p < 1) throw std::invalid_argument("deviation_curve: p must be >= 1");
    if (alpha.times.empty() || reference.times.empty()) {
        throw std::invalid_argument("deviation_curve: empty trajectory");
    }
    const double needed = static_cast<double>(p) * alpha.times.back();
    const double cover = reference.times.back() * (1.0 + 1e-12) + 1e-15;
    if (needed > cover) {
        std::ostringstream msg;
        msg << "deviation_curve: reference horizon " << reference.times.back()
            << " does not cover rescaled horizon " << needed;
        throw CoverageError(msg.str());
    }

    std::vector<std::pair<double, double>> out;
    out.reserve(alpha.times.size());
    for (std::size_t i = 0; i < alpha.times.size(); ++i) {
        const double s = static_cast<double>(p) * alpha.times[i];
        // Locate s on the reference grid and interpolate linearly.
        auto it = std::upper_bound(reference.times.begin(), reference.times.end(), s);
        Eigen::VectorXd ref;
        if (it == reference.times.begin()) {
            ref = reference.states.front();
        } else if (it == reference.times.end()) {
            ref = reference.states.back();
        } else {
            const std::size_t j = static_cast<std::size_t>(it - reference.times.begin());
            const double s0 = reference.times[j - 1], s1 = reference.times[j];
            const double w = (s - s0) / (s1 - s0);
            ref = reference.states[j - 1] + w * (reference.states[j] - reference.states[j - 1]);
        }
        out.emplace_back(alpha.times[i], (alpha.states[i] - ref).norm());
    }
    return out;
}

double theorem1_bound(const Eigen::MatrixXd& K, double l, double h, double eta, int p, double t,
                      double failure_prob) {
    if (!(failure_prob > 0) || failure_prob > 1) {
        throw std::domain_error("theorem1_bound: failure probability must be in (0, 1]");
    }
    if (l < 0 || eta < 0 || t < 0 || p < 1) {
        throw std::domain_error("theorem1_bound: l, eta, t must be nonnegative and p >= 1");
    }
    if (!(h > 0)) throw std::domain_error("theorem1_bound: h must be positive");

    const Eigen::MatrixXd kkt = K * K.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(kkt);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double opnorm = sv(0);
    if (sv(sv.size() - 1) <= 1e-12 * std::max(opnorm, 1.0)) {
        throw std::domain_error("theorem1_bound: K K^T is singular");
    }

    const double frob_k2 = K.squaredNorm();          // ||K||_F^2
    const double frob_kkt2 = kkt.squaredNorm();      // ||KK^T||_F^2
    const double amplitude = l * std::sqrt(frob_k2 * frob_k2 + frob_kkt2) /
                             (h * std::sqrt(static_cast<double>(p) * failure_prob) * opnorm);
    return amplitude * std::expm1(eta * p * t * h * opnorm);
}

ViolationReport bound_violation_rate(const SubspaceSpec& spec, const LossSpec& loss, double horizon,
                                     double dt, int trials, double failure_prob,
                                     std::uint64_t master_seed) {
    spec.validate(/*for_theorem=*/true);
    if (trials < 1) throw std::invalid_argument("bound_violation_rate: trials must be >= 1");
    if (!(failure_prob > 0) || failure_prob > 1) {
        throw std::invalid_argument("bound_violation_rate: failure probability must be in (0, 1]");
    }

    const int p = spec.controllable_dim;
    const Eigen::MatrixXd kkt = spec.projection * spec.projection.transpose();
    const double opnorm = operator_norm(kkt);

    // Reference trajectory on an aligned grid: step p*dt over horizon p*horizon,
    // so A_{p t_k} falls exactly on grid nodes.
    const FlowTrajectory reference =
        integrate_reference_flow(spec, loss, static_cast<double>(p) * horizon,
                                 static_cast<double>(p) * dt);

    // l and h over the observed reference region, inflated by 50%.
    const Box box = bounding_box(reference.states).inflated(0.5);
    const auto [lipschitz_l, lipschitz_h] = lipschitz_over_box(loss, box);

    // Bound per grid time (shared by all trials).
    std::vector<double> bound_at;
    bound_at.reserve(reference.times.size());
    for (std::size_t k = 0; k < reference.times.size(); ++k) {
        const double t = reference.times[k] / static_cast<double>(p);
        bound_at.push_back(theorem1_bound(spec.projection, lipschitz_l, lipschitz_h,
                                          spec.learning_rate, p, t, failure_prob));
    }

    ViolationReport report;
    report.trials = trials;
    report.loss_box = box;
    report.lipschitz_l = lipschitz_l;
    report.lipschitz_h = lipschitz_h;
    report.opnorm_kkt = opnorm;

    for (int trial = 0; trial < trials; ++trial) {
        TrialRecord record;
        record.index = trial;
        record.seed = derive_seed(master_seed, static_cast<std::uint64_t>(trial));
        try {
            const EmbeddingMatrix embedding = sample_embedding(spec, record.seed);
            const FlowTrajectory alpha = integrate_controlled_flow(spec, embedding, loss, horizon, dt);
            for (std::size_t k = 0; k < alpha.times.size() && k < reference.states.size(); ++k) {
                const double dev = (alpha.states[k] - reference.states[k]).norm();
                record.max_deviation = std::max(record.max_deviation, dev);
                if (bound_at[k] > 0) {
                    record.max_bound_ratio = std::max(record.max_bound_ratio, dev / bound_at[k]);
                }
                if (dev > bound_at[k]) record.violated = true;
            }
        } catch (const DivergenceError& e) {
            record.diverged = true;
            record.violated = true;  // a diverged trajectory certainly exceeds the bound
            record.note = e.what();
        }
        if (record.violated) ++report.violations;
        report.records.push_back(std::move(record));
    }
    report.rate = static_cast<double>(report.violations) / static_cast<double>(trials);
    return report;
}

NoiseStats noise_matrix_stats(const Eigen::MatrixXd& K, int p, int trials, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("noise_matrix_stats: p must be >= 1");
    if (trials < 1) throw std::invalid_argument("noise_matrix_stats: trials must be >= 1");

    const int ambient = static_cast<int>(K.cols());
    const Eigen::MatrixXd kkt = K * K.transpose();
    const double frob_k2 = K.squaredNorm();

    NoiseStats stats;
    stats.analytic = static_cast<double>(p) * (frob_k2 * frob_k2 + kkt.squaredNorm());

    Rng rng(seed);
    Eigen::VectorXd column(ambient);
    double sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        // Accumulate KRR^TK^T column by column: sum_l (K r_l)(K r_l)^T.
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(K.rows(), K.rows());
        for (int l = 0; l < p; ++l) {
            for (int i = 0; i < ambient; ++i) column(i) = rng.gaussian();
            const Eigen::VectorXd v = K * column;
            gram.noalias() += v * v.transpose();
        }
        sum += (gram - static_cast<double>(p) * kkt).squaredNorm();
    }
    stats.empirical_mean_frob_sq = sum / static_cast<double>(trials);
    return stats;
}

double stable_dt(double eta, int p, double lipschitz_h, double opnorm_kkt, double safety) {
    if (!(safety > 0) || safety > 0.1 + 1e-15) {
        throw std::invalid_argument("stable_dt: safety factor must be in (0, 0.1]");
    }
    const double curvature = eta * static_cast<double>(p) * lipschitz_h * opnorm_kkt;
    if (!(curvature > 0)) throw std::invalid_argument("stable_dt: nonpositive curvature");
    return safety / curvature;
}

double euler_tolerance(double dt, double lambda_max, double dist) {
    return 0.5 * dt * lambda_max * dist;
}

std::vector<std::optional<long>> gd_iterations_to_thresholds(const Eigen::MatrixXd& gram,
                                                             const Eigen::VectorXd& alpha0,
                                                             const Eigen::VectorXd& target, double lr,
                                                             const std::vector<double>& thresholds,
                                                             long max_iters) {
    std::vector<std::optional<long>> hit(thresholds.size());
    auto note_loss = [&](double loss, long iter) {
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (!hit[i] && loss <= thresholds[i]) hit[i] = iter;
        }
    };

    Eigen::VectorXd alpha = alpha0;
    note_loss((alpha - target).squaredNorm(), 0);
    for (long iter = 1; iter <= max_iters; ++iter) {
        alpha -= lr * (gram * (2.0 * (alpha - target)));
        const double loss = (alpha - target).squaredNorm();
        if (!std::isfinite(loss)) {
            throw DivergenceError("gradient descent diverged", static_cast<double>(iter));
        }
        note_loss(loss, iter);
        if (std::all_of(hit.begin(), hit.end(), [](const auto& h) { return h.has_value(); })) break;
    }
    return hit;
}

std::vector<scale_time::TradeoffCurve> linear_tradeoff_experiment(
    const TradeoffExperimentConfig& config) {
    if (config.p_grid.empty()) throw std::invalid_argument("tradeoff: empty p grid");
    if (config.loss_thresholds.empty()) throw std::invalid_argument("tradeoff: no thresholds");
    if (config.trials < 1) throw std::invalid_argument("tradeoff: trials must be >= 1");
    for (double thr : config.loss_thresholds) {
        if (!(thr > 0)) throw std::invalid_argument("tradeoff: thresholds must be positive");
    }

    const int P = config.ambient_dim;
    const int r = config.projection_dim;

    // iterations[threshold][p][trial]
    std::vector<std::vector<std::vector<std::optional<long>>>> iterations(
        config.loss_thresholds.size(),
        std::vector<std::vector<std::optional<long>>>(config.p_grid.size()));

    for (int trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(config.master_seed, trial);
        Rng problem_rng(trial_seed);
        Eigen::MatrixXd K(r, P);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < P; ++j) K(i, j) = problem_rng.gaussian();
        Eigen::VectorXd beta0(P);
        for (int j = 0; j < P; ++j) beta0(j) = problem_rng.gaussian();
        Eigen::VectorXd target(r);
        for (int i = 0; i < r; ++i) target(i) = problem_rng.gaussian();
        const Eigen::VectorXd k_beta0 = K * beta0;

        for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
            const int p = config.p_grid[pi];
            Rng embed_rng(derive_seed(trial_seed, 0x52, p));
            Eigen::MatrixXd m(r, p);  // K R, built column by column
            Eigen::VectorXd column(P);
            for (int l = 0; l < p; ++l) {
                for (int j = 0; j < P; ++j) column(j) = embed_rng.gaussian();
                m.col(l) = K * column;
            }
            Eigen::VectorXd theta0(p);
            for (int l = 0; l < p; ++l) theta0(l) = embed_rng.gaussian();

            const Eigen::MatrixXd gram = m * m.transpose();
            const Eigen::VectorXd alpha0 = k_beta0 + m * theta0;

            std::vector<double> thresholds = config.loss_thresholds;
            if (config.thresholds_relative) {
                const double initial = (alpha0 - target).squaredNorm();
                for (double& thr : thresholds) thr *= initial;
            }
            const auto hits = gd_iterations_to_thresholds(gram, alpha0, target,
                                                          config.learning_rate, thresholds,
                                                          config.max_iters);
            for (std::size_t ti = 0; ti < hits.size(); ++ti) {
                iterations[ti][pi].push_back(hits[ti]);
            }
        }
    }

    std::vector<scale_time::TradeoffCurve> curves;
    for (std::size_t ti = 0; ti < config.loss_thresholds.size(); ++ti) {
        scale_time::TradeoffCurve curve;
        curve.threshold = config.loss_thresholds[ti];
        curve.channel = scale_time::Channel::Train;
        for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
            scale_time::TradeoffPoint point;
            point.scale = static_cast<double>(config.p_grid[pi]);
            point.n_runs = config.trials;
            std::vector<double> reached;
            for (const auto& h : iterations[ti][pi]) {
                if (h) {
                    reached.push_back(static_cast<double>(*h));
                } else {
                    ++point.n_censored;
                }
            }
            if (!reached.empty()) {
                double mean = 0;
                for (double v : reached) mean += v;
                mean /= static_cast<double>(reached.size());
                point.min_time = mean;
                if (reached.size() >= 2) {
                    double ss = 0;
                    for (double v : reached) ss += (v - mean) * (v - mean);
                    point.std_err = std::sqrt(ss / static_cast<double>(reached.size() - 1)) /
                                    std::sqrt(static_cast<double>(reached.size()));
                    point.has_std_err = true;
                }
            }
            curve.points.push_back(point);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

}  // namespace scalinglab::subspace

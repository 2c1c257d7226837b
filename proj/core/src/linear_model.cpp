#include "scalinglab/linear_model.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scalinglab/rng.hpp"

namespace scalinglab::linear {

namespace {

void svd_full(const Eigen::MatrixXd& X, Eigen::MatrixXd& U, Eigen::VectorXd& sigma,
              Eigen::MatrixXd& V) {
    // Jacobi is preferable for the small problems these instances tend to
    // be; divide and conquer takes over for larger ones.
    if (std::min(X.rows(), X.cols()) <= 16) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
        U = svd.matrixU();
        sigma = svd.singularValues();
        V = svd.matrixV();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
        U = svd.matrixU();
        sigma = svd.singularValues();
        V = svd.matrixV();
    }
}

Eigen::VectorXd gaussian_vector(Rng& rng, int size, double stddev) {
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i) v(i) = stddev * rng.gaussian();
    return v;
}

}  // namespace

double StudentTeacherInstance::rank_tol() const {
    if (sigma.size() == 0) return 0.0;
    return sigma(0) * 1e-12;
}

Eigen::MatrixXd sample_design(int n, int m, std::uint64_t seed) {
    if (n < 1 || m < 1) throw std::invalid_argument("sample_design: n, m must be >= 1");
    Rng rng(seed);
    Eigen::MatrixXd X(n, m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            X(i, j) = rng.gaussian();
        }
    }
    return X;
}

StudentTeacherInstance make_instance(int n, int m, const PriorSpec& prior, double eta,
                                     std::uint64_t seed) {
    Eigen::MatrixXd X = sample_design(n, m, derive_seed(seed, 0));
    Rng w_rng(derive_seed(seed, 1));
    Rng e_rng(derive_seed(seed, 2));
    Eigen::VectorXd w = gaussian_vector(w_rng, m, prior.teacher_scale);
    Eigen::VectorXd noise = gaussian_vector(e_rng, n, prior.noise_scale);
    return instance_from_parts(std::move(X), std::move(w), std::move(noise), eta);
}

StudentTeacherInstance instance_from_parts(Eigen::MatrixXd X, Eigen::VectorXd w,
                                           Eigen::VectorXd noise, double eta) {
    if (w.size() != X.cols() || noise.size() != X.rows()) {
        throw std::invalid_argument("instance_from_parts: dimension mismatch");
    }
    StudentTeacherInstance inst;
    inst.Y = X * w + noise;
    inst.X = std::move(X);
    inst.w = std::move(w);
    inst.noise = std::move(noise);
    inst.eta = eta;
    svd_full(inst.X, inst.U, inst.sigma, inst.V);
    return inst;
}

Eigen::VectorXd theta_at(const StudentTeacherInstance& inst, double t) {
    if (t < 0) throw std::domain_error("theta_at: t must be nonnegative");
    // theta_t = V Sigma^+ (I - e^{-eta Sigma Sigma^T t}) U^T Y, evaluated
    // mode by mode.
    const int rank_extent = static_cast<int>(inst.sigma.size());
    const double tol = inst.rank_tol();
    const Eigen::VectorXd uty = inst.U.transpose() * inst.Y;

    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(inst.m());
    for (int i = 0; i < rank_extent; ++i) {
        const double s = inst.sigma(i);
        if (s <= tol) continue;
        coeffs(i) = -std::expm1(-inst.eta * s * s * t) / s * uty(i);
    }
    return inst.V * coeffs;
}

double prediction_error_at(const StudentTeacherInstance& inst, const Eigen::VectorXd& x, double t) {
    if (x.size() != inst.m()) throw std::invalid_argument("prediction_error_at: x has wrong length");
    return x.dot(theta_at(inst, t)) - x.dot(inst.w);
}

SignalNoiseCoeffs signal_noise_coeffs(const StudentTeacherInstance& inst, const Eigen::VectorXd& x) {
    if (x.size() != inst.m()) throw std::invalid_argument("signal_noise_coeffs: x has wrong length");
    const int m = inst.m();
    const int rank_extent = static_cast<int>(inst.sigma.size());
    const double tol = inst.rank_tol();

    SignalNoiseCoeffs coeffs;
    coeffs.x = x;
    coeffs.sigma_ext = sigma_extended(inst);

    const Eigen::VectorXd xv = inst.V.transpose() * x;   // (x^T V)_i
    const Eigen::VectorXd vtw = inst.V.transpose() * inst.w;
    const Eigen::VectorXd ute = inst.U.transpose() * inst.noise;

    coeffs.signal = Eigen::VectorXd::Zero(m);
    coeffs.noise = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        coeffs.signal(i) = -xv(i) * vtw(i);
        if (i < rank_extent && inst.sigma(i) > tol) {
            coeffs.noise(i) = xv(i) * ute(i);
        }
    }
    return coeffs;
}

double expansion_error_at(const SignalNoiseCoeffs& coeffs, double eta, double t) {
    double error = 0.0;
    for (Eigen::Index i = 0; i < coeffs.signal.size(); ++i) {
        const double s = coeffs.sigma_ext(i);
        const double decay = std::exp(-eta * s * s * t);
        error += coeffs.signal(i) * decay;
        if (s > 0) {
            error += coeffs.noise(i) * (-std::expm1(-eta * s * s * t)) / s;
        }
    }
    return error;
}

ErrorTriple expected_error_closed_form(const Eigen::VectorXd& sigma_ext,
                                       const Eigen::VectorXd& xv_sq, const PriorSpec& prior,
                                       double eta, double t) {
    if (sigma_ext.size() != xv_sq.size()) {
        throw std::invalid_argument("expected_error_closed_form: length mismatch");
    }
    if (t < 0) throw std::domain_error("expected_error_closed_form: t must be nonnegative");

    const double sw2 = prior.teacher_scale * prior.teacher_scale;
    const double se2 = prior.noise_scale * prior.noise_scale;

    ErrorTriple out;
    for (Eigen::Index i = 0; i < sigma_ext.size(); ++i) {
        const double s = sigma_ext(i);
        const double decay = std::exp(-eta * s * s * t);
        out.signal_sq += sw2 * xv_sq(i) * decay * decay;
        if (s > 0) {
            const double rise = -std::expm1(-eta * s * s * t);  // 1 - e^{-eta s^2 t}
            out.noise_sq += se2 * xv_sq(i) * rise * rise / (s * s);
        }
    }
    out.total = out.signal_sq + out.noise_sq;
    return out;
}

MonteCarloEstimate expected_error_monte_carlo(int n, int m, const PriorSpec& prior, double eta,
                                              double t, int draws, std::uint64_t seed) {
    if (draws < 2) throw std::invalid_argument("expected_error_monte_carlo: draws must be >= 2");
    if (prior.x_mode == PriorSpec::XMode::Fixed && prior.x_fixed.size() != m) {
        throw std::invalid_argument("expected_error_monte_carlo: fixed x has wrong length");
    }

    // The same X a make_instance(seed) would draw.
    const Eigen::MatrixXd X = sample_design(n, m, derive_seed(seed, 0));
    Eigen::MatrixXd U, V;
    Eigen::VectorXd sigma;
    svd_full(X, U, sigma, V);
    const double tol = sigma.size() ? sigma(0) * 1e-12 : 0.0;
    const int rank_extent = static_cast<int>(sigma.size());

    Rng rng(derive_seed(seed, 3));
    double sum = 0.0, sum_sq = 0.0;
    Eigen::VectorXd x = prior.x_fixed;
    for (int d = 0; d < draws; ++d) {
        const Eigen::VectorXd w = gaussian_vector(rng, m, prior.teacher_scale);
        const Eigen::VectorXd noise = gaussian_vector(rng, n, prior.noise_scale);
        if (prior.x_mode == PriorSpec::XMode::IsotropicAverage) {
            x = gaussian_vector(rng, m, 1.0);
        }
        const Eigen::VectorXd Y = X * w + noise;
        const Eigen::VectorXd uty = U.transpose() * Y;
        // Direct path: theta_t through the SVD, then x^T theta_t - x^T w.
        Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < rank_extent; ++i) {
            const double s = sigma(i);
            if (s <= tol) continue;
            coeffs(i) = -std::expm1(-eta * s * s * t) / s * uty(i);
        }
        const double err = x.dot(V * coeffs) - x.dot(w);
        sum += err * err;
        sum_sq += err * err * err * err;
    }

    MonteCarloEstimate est;
    const double dn = static_cast<double>(draws);
    est.estimate = sum / dn;
    const double var = std::max(0.0, (sum_sq - sum * sum / dn) / (dn - 1.0));
    est.standard_error = std::sqrt(var / dn);
    return est;
}

ErrorTriple unified_error(const Eigen::VectorXd& sigma_ext, const Eigen::VectorXd& xv_sq,
                          const PriorSpec& prior, double eta, double scale, double t) {
    if (!(scale > 0)) throw std::domain_error("unified_error: scale must be positive");
    return expected_error_closed_form(sigma_ext, xv_sq, prior, eta, scale * t);
}

Eigen::VectorXd sigma_extended(const StudentTeacherInstance& inst) {
    const double tol = inst.rank_tol();
    Eigen::VectorXd ext = Eigen::VectorXd::Zero(inst.m());
    for (int i = 0; i < static_cast<int>(inst.sigma.size()) && i < inst.m(); ++i) {
        ext(i) = inst.sigma(i) > tol ? inst.sigma(i) : 0.0;
    }
    return ext;
}

namespace {

Eigen::VectorXd spectrum_for(const ScanConfig& config, int n, std::uint64_t seed) {
    if (!config.spectrum.explicit_sigma.empty()) {
        if (static_cast<int>(config.spectrum.explicit_sigma.size()) > config.m) {
            throw std::invalid_argument("scan_curve: explicit spectrum longer than m");
        }
        Eigen::VectorXd ext = Eigen::VectorXd::Zero(config.m);
        for (std::size_t i = 0; i < config.spectrum.explicit_sigma.size(); ++i) {
            ext(static_cast<Eigen::Index>(i)) = config.spectrum.explicit_sigma[i];
        }
        return ext;
    }
    const Eigen::MatrixXd X = sample_design(n, config.m, seed);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);  // singular values only
    const Eigen::VectorXd& sv = svd.singularValues();
    const double tol = sv.size() ? sv(0) * 1e-12 : 0.0;
    Eigen::VectorXd ext = Eigen::VectorXd::Zero(config.m);
    for (int i = 0; i < static_cast<int>(sv.size()) && i < config.m; ++i) {
        ext(i) = sv(i) > tol ? sv(i) : 0.0;
    }
    return ext;
}

}  // namespace

ErrorCurve scan_curve(const ScanConfig& config) {
    if (config.grid.empty()) throw std::invalid_argument("scan_curve: empty grid");
    for (std::size_t i = 0; i + 1 < config.grid.size(); ++i) {
        if (!(config.grid[i] < config.grid[i + 1])) {
            throw std::invalid_argument("scan_curve: grid must be strictly increasing");
        }
    }
    if (!(config.grid.front() > 0)) throw std::invalid_argument("scan_curve: grid must be positive");
    if (config.m < 1) throw std::invalid_argument("scan_curve: m must be >= 1");
    if (config.prior.x_mode == PriorSpec::XMode::Fixed) {
        throw std::invalid_argument(
            "scan_curve: fixed test points are not supported; average isotropically or use "
            "expected_error_closed_form directly");
    }
    const Eigen::VectorXd xv_sq = Eigen::VectorXd::Ones(config.m);

    const bool sampled = config.spectrum.explicit_sigma.empty();
    std::vector<std::uint64_t> seeds = sampled ? config.spectrum.seeds : std::vector<std::uint64_t>{0};
    if (seeds.empty()) throw std::invalid_argument("scan_curve: no spectrum seeds");

    ErrorCurve curve;
    curve.axis = config.axis;
    curve.grid = config.grid;
    const std::size_t npoints = config.grid.size();
    curve.total_sq_error.assign(npoints, 0.0);
    curve.signal_sq.assign(npoints, 0.0);
    curve.noise_sq.assign(npoints, 0.0);

    if (config.axis == Axis::Data) {
        if (!sampled) {
            throw std::invalid_argument("scan_curve: data-axis scans need sampled spectra");
        }
        for (std::size_t gi = 0; gi < npoints; ++gi) {
            const double g = config.grid[gi];
            if (std::floor(g) != g || g < 1) {
                throw std::invalid_argument("scan_curve: data-axis grid entries must be positive integers");
            }
            const int n = static_cast<int>(g);
            for (std::uint64_t seed : seeds) {
                const Eigen::VectorXd sig = spectrum_for(config, n, derive_seed(seed, 0x0da7a, n));
                const ErrorTriple e =
                    unified_error(sig, xv_sq, config.prior, config.eta, config.scale, config.time);
                curve.total_sq_error[gi] += e.total;
                curve.signal_sq[gi] += e.signal_sq;
                curve.noise_sq[gi] += e.noise_sq;
            }
        }
    } else {
        if (sampled && config.n < 1) throw std::invalid_argument("scan_curve: n must be >= 1");
        for (std::uint64_t seed : seeds) {
            const Eigen::VectorXd sig = spectrum_for(config, config.n, derive_seed(seed, 0x5bec));
            for (std::size_t gi = 0; gi < npoints; ++gi) {
                const ErrorTriple e =
                    config.axis == Axis::Time
                        ? unified_error(sig, xv_sq, config.prior, config.eta, config.scale,
                                        config.grid[gi])
                        : unified_error(sig, xv_sq, config.prior, config.eta, config.grid[gi],
                                        config.time);
                curve.total_sq_error[gi] += e.total;
                curve.signal_sq[gi] += e.signal_sq;
                curve.noise_sq[gi] += e.noise_sq;
            }
        }
    }

    const double inv = 1.0 / static_cast<double>(seeds.size());
    for (std::size_t gi = 0; gi < npoints; ++gi) {
        curve.signal_sq[gi] *= inv;
        curve.noise_sq[gi] *= inv;
        curve.total_sq_error[gi] = curve.signal_sq[gi] + curve.noise_sq[gi];
    }

    curve.metadata["axis"] = config.axis == Axis::Time    ? "time"
                             : config.axis == Axis::Scale ? "scale"
                                                          : "data";
    curve.metadata["m"] = std::to_string(config.m);
    curve.metadata["n"] = std::to_string(config.n);
    curve.metadata["eta"] = std::to_string(config.eta);
    curve.metadata["teacher_scale"] = std::to_string(config.prior.teacher_scale);
    curve.metadata["noise_scale"] = std::to_string(config.prior.noise_scale);
    curve.metadata["spectrum"] = sampled ? "sampled" : "explicit";
    if (config.axis != Axis::Time) curve.metadata["time"] = std::to_string(config.time);
    if (config.axis != Axis::Scale) curve.metadata["scale"] = std::to_string(config.scale);
    return curve;
}

std::vector<Eigen::Vector2d> trajectory_2d(const StudentTeacherInstance& inst,
                                           const std::vector<double>& t_grid) {
    if (inst.m() != 2) throw std::invalid_argument("trajectory_2d: instance must have m == 2");
    std::vector<Eigen::Vector2d> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        out.emplace_back(theta_at(inst, t));
    }
    return out;
}

}  // namespace scalinglab::linear

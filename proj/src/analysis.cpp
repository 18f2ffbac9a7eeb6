#include "qbm/analysis.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "qbm/error.hpp"

namespace qbm {

namespace {

std::mutex fftw_planner_mutex;  // planning is not thread safe

double sampling_step(std::span<const double> times) {
    if (times.size() < 8) throw Error(ErrorKind::Config, "series too short for spectral analysis");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-6 * dt)
            throw Error(ErrorKind::Config, "series is not uniformly sampled");
    return dt;
}

}  // namespace

std::vector<SpectralPeak> fft_peaks(std::span<const double> times, std::span<const double> values, int count,
                                    double min_frequency) {
    if (times.size() != values.size()) throw Error(ErrorKind::Config, "times and values differ in length");
    const double dt = sampling_step(times);
    const std::size_t n = values.size();
    std::size_t nfft = 1;
    while (nfft < 8 * n) nfft <<= 1;

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);

    double* in = fftw_alloc_real(nfft);
    fftw_complex* out = fftw_alloc_complex(nfft / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in, out, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < nfft; ++i) {
        if (i < n) {
            const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
            in[i] = w * (values[i] - mean);
        } else {
            in[i] = 0.0;
        }
    }
    fftw_execute(plan);
    std::vector<double> power(nfft / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    {
        std::lock_guard lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);

    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(nfft) * dt);
    std::vector<SpectralPeak> peaks;
    for (std::size_t k = 1; k + 1 < power.size(); ++k) {
        if (k * bin < min_frequency) continue;
        if (!(power[k] > power[k - 1] && power[k] >= power[k + 1]) || power[k] <= 0.0) continue;
        double shift = 0.0;
        if (power[k - 1] > 0.0 && power[k + 1] > 0.0) {
            const double l = std::log(power[k - 1]), c = std::log(power[k]), r = std::log(power[k + 1]);
            const double denom = l - 2.0 * c + r;
            if (denom < 0.0) shift = 0.5 * (l - r) / denom;
        }
        peaks.push_back({(static_cast<double>(k) + shift) * bin, power[k]});
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.power > b.power; });
    if (peaks.size() > static_cast<std::size_t>(count)) peaks.resize(static_cast<std::size_t>(count));
    return peaks;
}

double TwoModeFit::operator()(double t) const {
    return a * std::sin(omega_r * (t - t0)) + b * std::sin(omega_R * (t - t0_prime)) + offset;
}

namespace {

// Sum of `modes` sinusoids a_k sin(w_k tau + p_k) plus an offset, tau = t - center.
struct SinusoidFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    std::span<const double> tau;
    std::span<const double> y;
    int modes;

    int inputs() const { return 3 * modes + 1; }
    int values() const { return static_cast<int>(y.size()); }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        for (std::size_t i = 0; i < y.size(); ++i) {
            double v = x[3 * modes];
            for (int m = 0; m < modes; ++m) v += x[3 * m] * std::sin(x[3 * m + 1] * tau[i] + x[3 * m + 2]);
            f[static_cast<Eigen::Index>(i)] = v - y[i];
        }
        return 0;
    }

    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
        for (std::size_t i = 0; i < y.size(); ++i) {
            const Eigen::Index r = static_cast<Eigen::Index>(i);
            for (int m = 0; m < modes; ++m) {
                const double arg = x[3 * m + 1] * tau[i] + x[3 * m + 2];
                const double s = std::sin(arg), c = std::cos(arg);
                j(r, 3 * m) = s;
                j(r, 3 * m + 1) = x[3 * m] * c * tau[i];
                j(r, 3 * m + 2) = x[3 * m] * c;
            }
            j(r, 3 * modes) = 1.0;
        }
        return 0;
    }
};

struct SinusoidFit {
    Eigen::VectorXd x;
    double rms = 0.0;
    bool converged = false;
    int evaluations = 0;
};

// Amplitudes and phases for fixed frequencies by linear least squares.
Eigen::VectorXd linear_seed(std::span<const double> tau, std::span<const double> y, const std::vector<double>& freqs) {
    const int modes = static_cast<int>(freqs.size());
    const Eigen::Index n = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd a(n, 2 * modes + 1);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int m = 0; m < modes; ++m) {
            a(i, 2 * m) = std::sin(freqs[m] * tau[i]);
            a(i, 2 * m + 1) = std::cos(freqs[m] * tau[i]);
        }
        a(i, 2 * modes) = 1.0;
        rhs[i] = y[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
    Eigen::VectorXd x(3 * modes + 1);
    for (int m = 0; m < modes; ++m) {
        x[3 * m] = std::hypot(c[2 * m], c[2 * m + 1]);
        x[3 * m + 1] = freqs[m];
        x[3 * m + 2] = std::atan2(c[2 * m + 1], c[2 * m]);
    }
    x[3 * modes] = c[2 * modes];
    return x;
}

SinusoidFit fit_sinusoids(std::span<const double> tau, std::span<const double> y, const std::vector<double>& freqs,
                          const FitOptions& options) {
    SinusoidFunctor functor{tau, y, static_cast<int>(freqs.size())};
    SinusoidFit fit;
    fit.x = linear_seed(tau, y, freqs);
    Eigen::LevenbergMarquardt<SinusoidFunctor> lm(functor);
    lm.parameters.xtol = options.tolerance * 1e-3;
    lm.parameters.ftol = 1e-15;
    lm.parameters.maxfev = options.max_evaluations;
    const auto status = lm.minimize(fit.x);
    fit.evaluations = static_cast<int>(lm.nfev);
    fit.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                    status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters;
    Eigen::VectorXd f(functor.values());
    functor(fit.x, f);
    fit.rms = std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
    // canonical form: positive amplitude and frequency, phase in (-pi, pi]
    for (int m = 0; m < functor.modes; ++m) {
        double& amp = fit.x[3 * m];
        double& w = fit.x[3 * m + 1];
        double& p = fit.x[3 * m + 2];
        if (w < 0.0) {
            w = -w;
            p = -p;
            amp = -amp;
        }
        if (amp < 0.0) {
            amp = -amp;
            p += std::numbers::pi;
        }
        p = std::remainder(p, 2.0 * std::numbers::pi);
    }
    return fit;
}

}  // namespace

namespace {

// phase shifts are only defined modulo one period
double reduce_shift(double t0, double omega) {
    const double period = 2.0 * std::numbers::pi / omega;
    double r = std::fmod(t0, period);
    if (r < 0.0) r += period;
    return r;
}

}  // namespace

TwoModeFit fit_two_modes(std::span<const double> times, std::span<const double> values, const FitOptions& options) {
    if (times.size() != values.size()) throw Error(ErrorKind::Config, "times and values differ in length");
    sampling_step(times);
    const double span_t = times.back() - times.front();
    const double center = 0.5 * (times.front() + times.back());
    std::vector<double> tau(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) tau[i] = times[i] - center;

    TwoModeFit out;
    out.resolution = 2.0 * std::numbers::pi / span_t;

    const auto peaks = fft_peaks(times, values, 4);
    std::vector<std::vector<double>> seeds;
    if (options.seeds.size() == 2) seeds.push_back(options.seeds);
    if (peaks.size() >= 2) seeds.push_back({peaks[0].frequency, peaks[1].frequency});
    if (!peaks.empty()) {
        const double p = peaks[0].frequency;
        seeds.push_back({p - 0.5 * out.resolution, p + 0.5 * out.resolution});
        seeds.push_back({p - out.resolution, p});
        seeds.push_back({p, p + out.resolution});
    }
    seeds.push_back({std::sqrt(3.0), 2.0});

    SinusoidFit best;
    bool have = false;
    int evaluations = 0;
    for (const auto& s : seeds) {
        if (!(s[0] > 0.0 && s[1] > 0.0) || s[0] == s[1]) continue;
        SinusoidFit f = fit_sinusoids(tau, values, s, options);
        evaluations += f.evaluations;
        if (!std::isfinite(f.rms)) continue;
        if (!have || (f.converged && !best.converged) || (f.converged == best.converged && f.rms < best.rms)) {
            best = f;
            have = true;
        }
    }

    const double seed_single = peaks.empty() ? 2.0 : peaks[0].frequency;
    SinusoidFit single = fit_sinusoids(tau, values, {seed_single}, options);
    evaluations += single.evaluations;
    out.single_mode_residual_rms = single.rms;
    out.evaluations = evaluations;

    bool merged = !have || !best.converged;
    if (!merged) {
        const double sep = std::abs(best.x[1] - best.x[4]);
        const double weak = std::min(best.x[0], best.x[3]), strong = std::max(best.x[0], best.x[3]);
        merged = sep < out.resolution || weak < 1e-4 * strong;
    }
    if (merged) {
        out.merged = true;
        out.converged = single.converged;
        out.a = single.x[0];
        out.omega_r = out.omega_R = single.x[1];
        out.t0 = out.t0_prime = reduce_shift(center - single.x[2] / single.x[1], single.x[1]);
        out.b = 0.0;
        out.offset = single.x[3];
        out.residual_rms = single.rms;
        return out;
    }
    int lo = best.x[1] <= best.x[4] ? 0 : 1;
    int hi = 1 - lo;
    out.converged = true;
    out.a = best.x[3 * lo];
    out.omega_r = best.x[3 * lo + 1];
    out.t0 = reduce_shift(center - best.x[3 * lo + 2] / out.omega_r, out.omega_r);
    out.b = best.x[3 * hi];
    out.omega_R = best.x[3 * hi + 1];
    out.t0_prime = reduce_shift(center - best.x[3 * hi + 2] / out.omega_R, out.omega_R);
    out.offset = best.x[6];
    out.residual_rms = best.rms;
    return out;
}

std::vector<ResonancePeak> find_resonance_peaks(std::span<const double> omegas, std::span<const double> values,
                                                double min_prominence) {
    const std::size_t n = omegas.size();
    if (n != values.size()) throw Error(ErrorKind::Config, "omegas and values differ in length");
    if (n < 3) return {};
    std::vector<double> h(n);
    const double slope = (values[n - 1] - values[0]) / (omegas[n - 1] - omegas[0]);
    for (std::size_t i = 0; i < n; ++i) h[i] = values[i] - (values[0] + slope * (omegas[i] - omegas[0]));
    const double tallest = *std::max_element(h.begin(), h.end());
    if (!(tallest > 0.0)) return {};

    std::vector<ResonancePeak> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(h[i] > h[i - 1] && h[i] >= h[i + 1])) continue;
        if (h[i] <= 0.0) continue;
        double left_min = h[i], right_min = h[i];
        for (std::size_t j = i; j-- > 0;) {
            if (h[j] > h[i]) break;
            left_min = std::min(left_min, h[j]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (h[j] > h[i]) break;
            right_min = std::min(right_min, h[j]);
        }
        const double prominence = h[i] - std::max(left_min, right_min);
        if (prominence < min_prominence * tallest) continue;

        ResonancePeak p;
        // quadratic refinement of the center
        const double denom = h[i - 1] - 2.0 * h[i] + h[i + 1];
        const double step = 0.5 * (omegas[i + 1] - omegas[i - 1]);
        const double shift = denom < 0.0 ? 0.5 * (h[i - 1] - h[i + 1]) / denom : 0.0;
        p.center = omegas[i] + shift * step;
        p.height = h[i];
        const double floor = 0.05 * h[i];
        std::size_t a = i, b = i;
        while (a > 0 && h[a - 1] > floor) --a;
        while (b + 1 < n && h[b + 1] > floor) ++b;
        for (std::size_t k = a; k < b; ++k) p.area += 0.5 * (h[k] + h[k + 1]) * (omegas[k + 1] - omegas[k]);
        const double half = 0.5 * h[i];
        auto cross = [&](std::size_t inside, std::size_t outside) {
            const double t = (h[inside] - half) / (h[inside] - h[outside]);
            return omegas[inside] + t * (omegas[outside] - omegas[inside]);
        };
        std::size_t l = i, r = i;
        while (l > 0 && h[l - 1] > half) --l;
        while (r + 1 < n && h[r + 1] > half) ++r;
        const double w_left = l > 0 ? cross(l, l - 1) : omegas[0];
        const double w_right = r + 1 < n ? cross(r, r + 1) : omegas[n - 1];
        p.width = w_right - w_left;
        peaks.push_back(p);
    }
    return peaks;
}

double FitFormulaParams::d_c() const { return std::exp(0.5 * std::numbers::pi - std::atan(c)); }
double FitFormulaParams::d() const {
    const double dc = d_c();
    return (2.0 - std::sqrt(3.0) * dc) / (1.0 - dc);
}
double FitFormulaParams::a() const { return (std::sqrt(3.0) - d()) * std::exp(0.5 * std::numbers::pi); }

double eval_fit_formula(const FitFormulaParams& p, double lambda) {
    if (std::isinf(lambda)) return p.a() * std::exp(-0.5 * std::numbers::pi) + p.d();
    return p.a() * std::exp(-std::atan(p.b * lambda + p.c)) + p.d();
}

namespace {


struct FormulaResiduals {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    std::span<const double> x, y;
    int inputs() const { return 2; }
    int values() const { return static_cast<int>(x.size()); }
    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
        const FitFormulaParams params{p[0], p[1]};
        for (std::size_t i = 0; i < x.size(); ++i)
            f[static_cast<Eigen::Index>(i)] = eval_fit_formula(params, x[i]) - y[i];
        return 0;
    }
};

}  // namespace

FitFormulaCalibration fit_formula_calibrate(std::span<const double> lambdas, std::span<const double> omegas) {
    if (lambdas.size() != omegas.size()) throw Error(ErrorKind::Config, "curve columns differ in length");
    if (lambdas.size() < 4) throw Error(ErrorKind::Config, "calibration needs at least 4 points");
    FormulaResiduals residuals{lambdas, omegas};
    Eigen::VectorXd f(residuals.values());

    // coarse start on a (log b, c) grid
    Eigen::VectorXd best(2);
    double best_cost = INFINITY;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            Eigen::VectorXd p(2);
            p << std::pow(10.0, -2.0 + 4.0 * i / 40.0), -4.0 + 8.0 * j / 40.0;
            residuals(p, f);
            const double cost = f.squaredNorm();
            if (cost < best_cost) {
                best_cost = cost;
                best = p;
            }
        }
    Eigen::NumericalDiff<FormulaResiduals> numeric(residuals);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FormulaResiduals>> lm(numeric);
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    lm.parameters.maxfev = 2000;
    const auto status = lm.minimize(best);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !best.allFinite())
        throw Error(ErrorKind::Convergence, "fit-formula calibration diverged");
    FitFormulaCalibration out;
    out.params = {best[0], best[1]};
    residuals(best, f);
    out.residual_rms = std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
    out.max_deviation = f.cwiseAbs().maxCoeff();
    return out;
}

}  // namespace qbm

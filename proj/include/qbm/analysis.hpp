#pragma once

// Mode extraction: two-frequency least-squares fits, periodogram peaks,
// resonance-spectrum peaks and areas, and the closed-form frequency curve.

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qbm {

struct SpectralPeak {
    double frequency = 0.0;  // angular
    double power = 0.0;
};

/// Hann-windowed, zero-padded periodogram of a uniformly sampled series
/// (mean removed). Returns up to `count` local maxima above min_frequency,
/// strongest first, located by quadratic interpolation of log power.
std::vector<SpectralPeak> fft_peaks(std::span<const double> times, std::span<const double> values,
                                    int count = 4, double min_frequency = 0.2);

/// f(t) = a sin(w_r (t - t0)) + b sin(w_R (t - t0')) + f0 with w_r <= w_R.
/// When the two frequencies are closer than 2 pi / T the result is a
/// single-mode fit flagged `merged`, with both frequencies equal and b = 0.
struct TwoModeFit {
    double a = 0.0, b = 0.0;
    double omega_r = 0.0, omega_R = 0.0;
    double t0 = 0.0, t0_prime = 0.0;
    double offset = 0.0;
    double residual_rms = 0.0;
    double single_mode_residual_rms = 0.0;
    double resolution = 0.0;  // 2 pi / T
    bool merged = false;
    bool converged = false;
    int evaluations = 0;

    double operator()(double t) const;
};

struct FitOptions {
    std::vector<double> seeds;   // optional frequency pair
    double tolerance = 1e-9;     // relative parameter change
    int max_evaluations = 4000;
};

TwoModeFit fit_two_modes(std::span<const double> times, std::span<const double> values,
                         const FitOptions& options = {});

struct ResonancePeak {
    double center = 0.0;
    double height = 0.0;  // above the baseline
    double area = 0.0;
    double width = 0.0;   // full width at half height
};

struct ResonanceSpectrum {
    std::vector<double> omegas;
    std::vector<double> e_inf;
    std::vector<ResonancePeak> peaks;
    std::vector<double> failed;  // frequencies whose simulation failed
    bool partial = false;
};

/// Peaks of E_inf(omega) above the straight line through the scan end
/// points. A local maximum counts when its prominence exceeds
/// `min_prominence` of the tallest peak. Areas integrate (trapezoid) the
/// height above baseline over the contiguous region above 5% of the peak.
std::vector<ResonancePeak> find_resonance_peaks(std::span<const double> omegas, std::span<const double> values,
                                                double min_prominence = 0.05);

/// omega(lambda) = a exp(-atan(b lambda + c)) + d with a, d fixed by
/// omega(0) = 2 and omega(inf) = sqrt(3).
struct FitFormulaParams {
    double b = 1.0;
    double c = 0.0;

    double d_c() const;
    double d() const;
    double a() const;
};

double eval_fit_formula(const FitFormulaParams& p, double lambda);

struct FitFormulaCalibration {
    FitFormulaParams params;
    double residual_rms = 0.0;
    double max_deviation = 0.0;
};

/// Least squares over (b, c). Needs at least 4 points.
FitFormulaCalibration fit_formula_calibrate(std::span<const double> lambdas, std::span<const double> omegas);

}  // namespace qbm

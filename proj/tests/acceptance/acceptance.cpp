// One line per criterion: "criterion N: PASS|FAIL  <details>".
// Exit status is the number of failed criteria (capped at 125).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qbm/analysis.hpp"
#include "qbm/basis.hpp"
#include "qbm/error.hpp"
#include "qbm/meanfield.hpp"
#include "qbm/simulation.hpp"

using namespace qbm;

namespace {

const double kSqrt3 = std::sqrt(3.0);

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

SystemSpec spec_of(double lambda, Symmetry sym = Symmetry::Antisymmetric, int d = 1, double kappa = 0.0) {
    SystemSpec s;
    s.coupling = lambda;
    s.symmetry = sym;
    s.dimension = d;
    s.softening = kappa;
    return s;
}

SimulationConfig kick(const SystemSpec& spec, Method m, double run_length = 0.0) {
    SimulationConfig c;
    c.spec = spec;
    c.solver.method = m;
    c.protocol = SwitchOff{};
    c.run_length = run_length;
    return c;
}

TwoModeFit kick_fit(const SimulationConfig& c, SimulationResult* out = nullptr) {
    SimulationResult r = simulate(c);
    TwoModeFit f = fit_breathing_modes(r, c.protocol);
    if (out) *out = std::move(r);
    return f;
}

const char* sym_name(Symmetry s) { return s == Symmetry::Symmetric ? "S" : "A"; }

void ideal_limit(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int d : {1, 2})
        for (Symmetry sym : {Symmetry::Symmetric, Symmetry::Antisymmetric}) {
            const SystemSpec s = spec_of(0.0, sym, d);
            const TwoModeFit b = kick_fit(kick(s, Method::Basis));
            const TwoModeFit g = kick_fit(kick(s, Method::Grid, 150.0));
            o.detail << d << "D" << sym_name(sym) << " basis " << b.omega_r << " grid " << g.omega_r << "; ";
            o.require(b.merged && std::abs(b.omega_r - 2.0) < 1e-6, "basis single mode 2 +- 1e-6");
            o.require(g.merged && std::abs(g.omega_r - 2.0) < 1e-3, "grid single mode 2 +- 1e-3");
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.detail << "runtime " << secs << " s";
    o.require(secs < 60.0, "runtime under 1 min");
}

void headline(Outcome& o) {
    const TwoModeFit f = kick_fit(kick(spec_of(1.0), Method::Basis));
    o.detail << "omega_r " << f.omega_r << " omega_R " << f.omega_R;
    o.require(std::abs(f.omega_r - 1.901) <= 0.005, "omega_r = 1.901 +- 0.005");
    o.require(std::abs(f.omega_R - 2.0) <= 0.003, "omega_R = 2.000 +- 0.003");
}

void universal_mode(Outcome& o) {
    double worst = 0.0;
    for (double l : {0.1, 1.0, 10.0})
        for (int d : {1, 2})
            for (Symmetry sym : {Symmetry::Symmetric, Symmetry::Antisymmetric}) {
                // omega_r(0.1) sits within 0.015 of 2, so resolve it with a long record
                const TwoModeFit f = kick_fit(kick(spec_of(l, sym, d), Method::Basis, l < 0.5 ? 2000.0 : 0.0));
                const double dev = f.merged ? 1.0 : std::abs(f.omega_R - 2.0);
                worst = std::max(worst, dev);
                if (dev > 1e-3) o.detail << "lambda " << l << " " << d << "D" << sym_name(sym) << " omega_R " << f.omega_R
                                         << (f.merged ? " (merged) " : " ");
            }
    o.detail << "max |omega_R - 2| " << worst;
    o.require(worst <= 1e-3, "omega_R = 2 +- 1e-3 everywhere");
}

void oracle_equivalence(Outcome& o) {
    for (double l : {0.5, 1.0, 2.0}) {
        const SystemSpec s = spec_of(l);
        const TwoModeFit f = kick_fit(kick(s, Method::Basis));
        const double gap = sector_gap(s).gap;
        o.detail << "lambda " << l << " fit " << f.omega_r << " gap " << gap << "; ";
        o.require(std::abs(f.omega_r - gap) < 1e-3, "fit vs gap at lambda " + std::to_string(l));
    }
}

void classical_asymptote(Outcome& o) {
    const double w100 = sector_gap(spec_of(100.0), 300).gap;
    const double w200 = sector_gap(spec_of(200.0), 300).gap;
    o.detail << "omega_r(100) " << w100 << " omega_r(200) " << w200 << " sqrt3 " << kSqrt3;
    o.require(std::abs(w100 - kSqrt3) / kSqrt3 < 0.02, "within 2% at 100");
    o.require(std::abs(w200 - kSqrt3) < std::abs(w100 - kSqrt3), "closer at 200");
}

std::vector<double> frequency_grid(double from, double to, double step) {
    std::vector<double> w;
    const int n = static_cast<int>(std::lround((to - from) / step));
    for (int i = 0; i <= n; ++i) w.push_back(from + i * step);
    return w;
}

void resonance(Outcome& o) {
    SimulationConfig c;
    c.spec = spec_of(1.0);
    c.protocol = Modulation{};
    const ResonanceSpectrum s = scan_resonance(c, frequency_grid(1.7, 2.1, 0.005));
    o.detail << "peaks:";
    for (const auto& p : s.peaks) o.detail << " " << p.center << " (area " << p.area << ")";
    o.detail << "; ";
    o.require(!s.partial, "all scan points ran");
    o.require(s.peaks.size() == 2, "exactly two peaks");
    if (s.peaks.size() == 2) {
        double lo = std::min(s.peaks[0].center, s.peaks[1].center);
        double hi = std::max(s.peaks[0].center, s.peaks[1].center);
        o.require(std::abs(lo - 1.901) <= 0.005, "lower peak at 1.901");
        o.require(std::abs(hi - 2.0) <= 0.005, "upper peak at 2.0");
    }
    const double wr = sector_gap(c.spec).gap;
    std::vector<double> e;
    for (double alpha : {0.95, 0.995, 1.0}) {
        SimulationConfig a = c;
        std::get<Modulation>(a.protocol).frequency = alpha * wr;
        const SimulationResult r = simulate(a);
        e.push_back(e_infinity(r.series) - r.ground_energy);
        o.detail << "alpha " << alpha << " dE " << e.back() << "; ";
    }
    o.require(e[0] < e[1] && e[1] < e[2], "plateaus ordered by alpha");
    o.require(e[2] > 10.0 * e[0], "resonant plateau 10x the detuned one");
}

void merging(Outcome& o) {
    SimulationConfig c;
    c.spec = spec_of(0.005);
    c.protocol = Modulation{5e-3, 240.0, 100.0, 2.0};
    const ResonanceSpectrum s = scan_resonance(c, frequency_grid(1.9, 2.1, 0.005));
    o.detail << "peaks:";
    for (const auto& p : s.peaks) o.detail << " " << p.center;
    o.require(!s.partial, "all scan points ran");
    o.require(s.peaks.size() == 1, "single unresolved peak");
}

void two_dimensions(Outcome& o) {
    const double anti = sector_gap(spec_of(1.0, Symmetry::Antisymmetric, 2)).gap;
    const double sym = sector_gap(spec_of(1.0, Symmetry::Symmetric, 2)).gap;
    const double one = sector_gap(spec_of(1.0)).gap;
    const double split = (anti - sym) / 2.0;
    o.detail << "2D A " << anti << " 2D S " << sym << " 1D " << one << " split/omega_R " << split
             << " (2D A - 1D)/1D " << (anti - one) / one << " (1D - 2D S)/1D " << (one - sym) / one;
    o.require(split > 0.03 && split < 0.07, "split in 3-7% of omega_R");
    o.require(sym < one && one < anti, "symmetric below, antisymmetric above the 1D curve");
}

struct Dip {
    double depth = 0.0;     // max (antisymmetric - symmetric)
    double at = 0.0;        // coupling of the deepest point
    bool nonmonotonic = false;
};

Dip softened_dip(double kappa, int size, const std::vector<double>& lambdas) {
    Dip d;
    std::vector<double> sym;
    for (double l : lambdas) {
        const double s = sector_gap(spec_of(l, Symmetry::Symmetric, 1, kappa), size).gap;
        const double a = sector_gap(spec_of(l, Symmetry::Antisymmetric, 1, kappa), size).gap;
        sym.push_back(s);
        if (a - s > d.depth) {
            d.depth = a - s;
            d.at = l;
        }
    }
    for (std::size_t i = 1; i + 1 < sym.size(); ++i)
        if (sym[i] < sym[i - 1] && sym[i] < sym[i + 1]) d.nonmonotonic = true;
    return d;
}

void softened(Outcome& o) {
    std::vector<double> lambdas;
    for (double x = -3.0; x <= 1.5001; x += 0.125) lambdas.push_back(std::pow(10.0, x));
    const Dip a = softened_dip(0.1, 200, lambdas);
    const Dip b = softened_dip(1e-3, 400, lambdas);
    o.detail << "kappa 0.1 depth " << a.depth << " at " << a.at << "; kappa 1e-3 depth " << b.depth << " at " << b.at;
    o.require(a.nonmonotonic, "kappa 0.1 curve nonmonotonic");
    o.require(a.depth > 0.0 && a.at <= 1.5, "dip below antisymmetric for lambda <~ 1");
    o.require(b.depth < a.depth, "smaller dip at kappa 1e-3");
    o.require(b.at < a.at, "dip moves to smaller lambda");
}

void fit_formula(Outcome& o) {
    std::uint64_t state = 12345;
    auto uniform = [&state](double lo, double hi) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return lo + (hi - lo) * static_cast<double>(state >> 11) / 9007199254740992.0;
    };
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        FitFormulaParams p{uniform(0.01, 10.0), uniform(-5.0, 5.0)};
        worst = std::max(worst, std::abs(eval_fit_formula(p, 0.0) - 2.0));
        worst = std::max(worst, std::abs(eval_fit_formula(p, 1e300) - kSqrt3));
    }
    std::vector<double> lambdas, omegas;
    for (double x = -1.0; x <= std::log10(30.0) + 1e-9; x += 0.05) {
        lambdas.push_back(std::pow(10.0, x));
        omegas.push_back(sector_gap(spec_of(lambdas.back())).gap);
    }
    const FitFormulaCalibration cal = fit_formula_calibrate(lambdas, omegas);
    o.detail << "limit error " << worst << " b " << cal.params.b << " c " << cal.params.c << " max deviation "
             << cal.max_deviation;
    o.require(worst < 1e-14, "limits to machine precision");
    o.require(cal.max_deviation < 0.01, "tracks the curve within 0.01");
}

void mean_field(Outcome& o) {
    double hartree = 0.0;
    for (double l : {0.01, 0.05, 0.1, 0.2, 0.3}) {
        const SystemSpec s = spec_of(l);
        const double exact = sector_gap(s).gap;
        hartree = std::max(hartree, std::abs(hartree_frequency(s).omega_r - exact) / exact);
    }
    double semi = 0.0;
    for (double l : {50.0, 100.0, 200.0, 500.0}) {
        const SystemSpec s = spec_of(l);
        const double exact = sector_gap(s, 300).gap;
        semi = std::max(semi, std::abs(semiclassical_frequency(s).omega_r - exact) / exact);
    }
    o.detail << "hartree max rel dev (<=0.3) " << hartree << " semiclassical max rel dev (>=50) " << semi;
    o.require(hartree < 0.01, "hartree within 1%");
    o.require(semi < 0.02, "semiclassical within 2%");
}

void properties(Outcome& o) {
    // grid: norm, energy after the kick, parity
    SimulationConfig g = kick(spec_of(1.0), Method::Grid, 60.0);
    SimulationResult rg;
    kick_fit(g, &rg);
    const double per_1e4 = rg.norm_drift * 1e4 / static_cast<double>(rg.steps);
    const auto& e = rg.series.channel("E_tot");
    double e_ref = 0.0, e_dev = 0.0;
    bool first = true;
    const SwitchOff k;
    for (std::size_t i = 0; i < rg.series.size(); ++i) {
        if (rg.series.times[i] <= k.t_on + k.duration + 1e-9) continue;
        if (first) e_ref = e[i], first = false;
        e_dev = std::max(e_dev, std::abs(e[i] - e_ref));
    }
    o.detail << "norm drift/1e4 steps " << per_1e4 << " energy drift " << e_dev << " parity " << rg.parity_error << "; ";
    o.require(per_1e4 < 1e-8, "norm drift");
    o.require(e_dev < 1e-6, "energy conservation");
    o.require(rg.parity_error < 1e-8, "parity");

    // separability: full two-particle basis against relative + center of mass
    SimulationConfig sep = kick(spec_of(1.0, Symmetry::Symmetric, 1, 1.0), Method::Basis, 60.0);
    SimulationConfig full = sep;
    full.solver.method = Method::TwoParticleBasis;
    const SimulationResult a = simulate(sep);
    const SimulationResult b = simulate(full);
    double sdev = 0.0;
    const auto& ua = a.series.channel("U_pot");
    const auto& ub = b.series.channel("U_pot");
    for (std::size_t i = 0; i < std::min(ua.size(), ub.size()); ++i) sdev = std::max(sdev, std::abs(ua[i] - ub[i]));
    o.detail << "separability " << sdev << "; ";
    o.require(sdev < 1e-5, "separability");

    // cross-method frequencies
    const TwoModeFit fg = kick_fit(kick(spec_of(1.0), Method::Grid));
    const TwoModeFit fb = kick_fit(kick(spec_of(1.0), Method::Basis));
    const double cross = std::max(std::abs(fg.omega_r - fb.omega_r), std::abs(fg.omega_R - fb.omega_R));
    o.detail << "grid/basis frequency difference " << cross;
    o.require(cross < 1e-3, "grid/basis agreement");
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"ideal limit", ideal_limit},
        {"headline frequencies", headline},
        {"universal center-of-mass mode", universal_mode},
        {"fit equals in-sector gap", oracle_equivalence},
        {"classical asymptote", classical_asymptote},
        {"resonance spectroscopy", resonance},
        {"mode merging", merging},
        {"2D spin-statistics split", two_dimensions},
        {"softened-potential pathology", softened},
        {"fit formula", fit_formula},
        {"mean-field regimes", mean_field},
        {"property suite", properties},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("criterion %zu: %s  %s: %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.str().c_str(), secs);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return std::min(failed, 125);
}

// qbm: command line driver. Exit codes: 0 ok, 1 configuration error,
// 2 numerical failure, 3 partial sweep or scan.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbm/basis.hpp"
#include "qbm/error.hpp"
#include "qbm/meanfield.hpp"
#include "qbm/runner.hpp"

using nlohmann::json;
using namespace qbm;

namespace {

enum Exit { Ok = 0, ConfigFailure = 1, NumericFailure = 2, Partial = 3 };

int exit_for(ErrorKind k) { return k == ErrorKind::Config || k == ErrorKind::Divergent ? ConfigFailure : NumericFailure; }

int exit_for(const std::string& kind) {
    return kind == to_string(ErrorKind::Config) || kind == to_string(ErrorKind::Divergent) ? ConfigFailure
                                                                                           : NumericFailure;
}

// Options shared by the verbs that build a run configuration.
struct Overrides {
    std::string config;
    std::optional<double> lambda, kappa, exponent, run_length;
    std::optional<int> dimension, workers, basis_size, points;
    std::optional<std::string> symmetry, method, output;
    bool convergence = false;

    void add(CLI::App* app) {
        app->add_option("-c,--config", config, "run configuration (JSON)");
        app->add_option("-l,--lambda", lambda, "coupling");
        app->add_option("-d,--dimension", dimension, "1 or 2");
        app->add_option("-s,--symmetry", symmetry, "symmetric or antisymmetric");
        app->add_option("-k,--kappa", kappa, "softening");
        app->add_option("--exponent", exponent, "interaction exponent l");
        app->add_option("-m,--method", method, "grid, two_particle_grid, basis, two_particle_basis");
        app->add_option("--basis-size", basis_size);
        app->add_option("--points", points);
        app->add_option("-T,--run-length", run_length);
        app->add_option("-o,--output", output, "output directory");
        app->add_option("-j,--workers", workers);
        app->add_flag("--converge", convergence, "repeat at a finer resolution and record the change");
    }

    RunConfig resolve() const {
        RunConfig c = config.empty() ? RunConfig{} : load_run_config(config);
        if (lambda) c.spec.coupling = *lambda;
        if (kappa) c.spec.softening = *kappa;
        if (exponent) c.spec.interaction_exponent = *exponent;
        if (dimension) c.spec.dimension = *dimension;
        if (symmetry) c.spec.symmetry = symmetry_from_string(*symmetry);
        if (method) c.solver.method = method_from_string(*method);
        if (basis_size) c.solver.basis_size = *basis_size;
        if (points) c.solver.points = *points;
        if (run_length) c.run_length = *run_length;
        if (output) c.output_dir = *output;
        if (workers) c.workers = *workers;
        if (convergence) c.convergence_check = true;
        c.spec.validate();
        return c;
    }
};

std::vector<double> frequency_grid(double from, double to, double step) {
    if (!(step > 0.0) || !(to > from)) throw Error(ErrorKind::Config, "frequency grid needs from < to and step > 0");
    std::vector<double> w;
    const long n = std::lround(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i) w.push_back(from + static_cast<double>(i) * step);
    return w;
}

std::vector<std::pair<double, double>> read_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read curve '" + path + "'");
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double l, w;
        if (!(ls >> l >> w)) throw Error(ErrorKind::Config, "bad curve line: " + line);
        double wR, ar, aR, ok = 1.0;
        if (ls >> wR >> ar >> aR >> ok && ok == 0.0) continue;  // failed sweep points
        pts.emplace_back(l, w);
    }
    return pts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-particle breathing modes in a harmonic trap"};
    app.require_subcommand(1);

    Overrides ground_o, run_o, sweep_o, scan_o;

    auto* ground = app.add_subcommand("ground", "ground-state energy and in-sector gap");
    ground_o.add(ground);

    auto* run = app.add_subcommand("run", "one time-domain run with mode fit");
    run_o.add(run);

    auto* sweep = app.add_subcommand("sweep", "breathing frequencies over a list of couplings");
    sweep_o.add(sweep);
    std::vector<double> sweep_lambdas;
    std::string sweep_mode;
    sweep->add_option("--lambdas", sweep_lambdas, "couplings (overrides the config)");
    sweep->add_option("--mode", sweep_mode, "time or spectral")->check(CLI::IsMember({"time", "spectral"}));

    auto* scan = app.add_subcommand("scan", "resonance spectrum over modulation frequencies");
    scan_o.add(scan);
    double scan_from = 1.5, scan_to = 2.3, scan_step = 0.01;
    bool scan_grid = false;
    scan->add_option("--from", scan_from);
    scan->add_option("--to", scan_to);
    scan->add_option("--step", scan_step);
    scan->add_flag("--grid", scan_grid, "use --from/--to/--step instead of the config's frequencies");

    auto* meanfield = app.add_subcommand("meanfield", "weak and strong coupling model frequencies");
    std::vector<double> mf_lambdas{0.1, 0.3, 1.0, 10.0, 50.0, 100.0};
    std::string mf_model = "both";
    int mf_dimension = 1;
    std::string mf_symmetry = "antisymmetric";
    meanfield->add_option("--lambdas", mf_lambdas);
    meanfield->add_option("--model", mf_model)->check(CLI::IsMember({"hartree", "semiclassical", "both"}));
    meanfield->add_option("-d,--dimension", mf_dimension);
    meanfield->add_option("-s,--symmetry", mf_symmetry);

    auto* fitformula = app.add_subcommand("fitformula", "calibrate the closed-form frequency curve");
    std::string ff_curve;
    std::vector<double> ff_lambdas;
    std::vector<double> ff_eval;
    fitformula->add_option("--curve", ff_curve, "columnar (lambda, omega_r) file, e.g. a sweep curve");
    fitformula->add_option("--lambdas", ff_lambdas, "compute the curve from the in-sector gap instead");
    fitformula->add_option("--eval", ff_eval, "couplings at which to print the calibrated formula");

    auto* emit = app.add_subcommand("emit", "plot table for a figure from saved summaries");
    std::string emit_figure, emit_out;
    std::vector<std::string> emit_inputs;
    emit->add_option("figure", emit_figure, "fig1, fig3, fig4 or fig5")->required();
    emit->add_option("-i,--input", emit_inputs, "summary files or directories")->required();
    emit->add_option("-o,--output", emit_out, "table path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : ConfigFailure;
    }

    try {
        if (ground->parsed()) {
            const RunConfig c = ground_o.resolve();
            bool mapped = false;
            const double e = ground_energy(c.spec, c.solver, &mapped);
            const SectorGap g = sector_gap(c.spec, c.solver.basis_size);
            json j = {{"system", json::parse(to_json(c))["system"]},
                      {"method", to_string(c.solver.method)},
                      {"ground_energy", e},
                      {"relative_ground", g.ground},
                      {"relative_excited", g.excited},
                      {"gap", g.gap},
                      {"mapped", mapped}};
            std::cout << j.dump(2) << "\n";
            return Ok;
        }
        if (run->parsed()) {
            const RunConfig c = run_o.resolve();
            const RunRecord r = run_single(c);
            std::cout << summary_json(r, c);
            for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
            if (!r.ok) {
                for (const auto& e : r.errors) std::cerr << "error [" << e.stage << "] " << e.message << "\n";
                return exit_for(r.errors.front().kind);
            }
            return Ok;
        }
        if (sweep->parsed()) {
            RunConfig c = sweep_o.resolve();
            if (!sweep_lambdas.empty()) c.sweep.couplings = sweep_lambdas;
            if (!sweep_mode.empty()) c.sweep.mode = sweep_mode == "time" ? SweepMode::Time : SweepMode::Spectral;
            const SweepResult s = run_sweep(c);
            std::printf("# lambda omega_r omega_R weight_r weight_R mapped\n");
            std::size_t good = 0;
            for (const auto& p : s.points) {
                if (p.ok) {
                    ++good;
                    std::printf("%.10g %.10f %.10f %.6f %.6f %d\n", p.coupling, p.omega_r, p.omega_R, p.weight_r,
                                p.weight_R, p.mapped ? 1 : 0);
                } else {
                    std::fprintf(stderr, "lambda %.10g failed: %s\n", p.coupling, p.error.c_str());
                }
            }
            if (!s.summary_path.empty()) std::fprintf(stderr, "summary: %s\n", s.summary_path.c_str());
            if (good == 0) return NumericFailure;
            return s.partial ? Partial : Ok;
        }
        if (scan->parsed()) {
            RunConfig c = scan_o.resolve();
            if (!std::holds_alternative<Modulation>(c.protocol)) c.protocol = Modulation{};
            if (scan_grid || c.sweep.frequencies.empty()) c.sweep.frequencies = frequency_grid(scan_from, scan_to, scan_step);
            const ScanResult s = run_scan(c);
            std::printf("# omega_ext e_inf\n");
            for (std::size_t i = 0; i < s.spectrum.omegas.size(); ++i)
                std::printf("%.6f %.12e\n", s.spectrum.omegas[i], s.spectrum.e_inf[i]);
            for (const auto& p : s.spectrum.peaks)
                std::printf("# peak center %.5f height %.6e area %.6e width %.5f\n", p.center, p.height, p.area, p.width);
            for (double w : s.spectrum.failed) std::fprintf(stderr, "omega_ext %.6f failed\n", w);
            if (s.spectrum.omegas.empty()) return NumericFailure;
            return s.spectrum.partial ? Partial : Ok;
        }
        if (meanfield->parsed()) {
            std::printf("# lambda gap hartree semiclassical\n");
            for (double l : mf_lambdas) {
                SystemSpec s;
                s.coupling = l;
                s.dimension = mf_dimension;
                s.symmetry = symmetry_from_string(mf_symmetry);
                s.validate();
                const double gap = sector_gap(s).gap;
                double h = NAN, sc = NAN;
                if (mf_model != "semiclassical") {
                    const auto r = hartree_frequency(s);
                    h = r.omega_r;
                    for (const auto& w : r.warnings) std::fprintf(stderr, "lambda %g hartree: %s\n", l, w.c_str());
                }
                if (mf_model != "hartree") {
                    try {
                        const auto r = semiclassical_frequency(s);
                        sc = r.omega_r;
                        for (const auto& w : r.warnings)
                            std::fprintf(stderr, "lambda %g semiclassical: %s\n", l, w.c_str());
                    } catch (const Error& e) {
                        std::fprintf(stderr, "lambda %g semiclassical: %s\n", l, e.what());
                    }
                }
                std::printf("%.10g %.10f %.10f %.10f\n", l, gap, h, sc);
            }
            return Ok;
        }
        if (fitformula->parsed()) {
            std::vector<double> ls, ws;
            if (!ff_curve.empty()) {
                for (auto [l, w] : read_curve(ff_curve)) {
                    ls.push_back(l);
                    ws.push_back(w);
                }
            } else if (!ff_lambdas.empty()) {
                for (double l : ff_lambdas) {
                    SystemSpec s;
                    s.coupling = l;
                    ls.push_back(l);
                    ws.push_back(sector_gap(s).gap);
                }
            } else {
                throw Error(ErrorKind::Config, "fitformula needs --curve or --lambdas");
            }
            const FitFormulaCalibration cal = fit_formula_calibrate(ls, ws);
            json j = {{"b", cal.params.b},
                      {"c", cal.params.c},
                      {"a", cal.params.a()},
                      {"d", cal.params.d()},
                      {"d_c", cal.params.d_c()},
                      {"residual_rms", cal.residual_rms},
                      {"max_deviation", cal.max_deviation},
                      {"points", ls.size()}};
            if (!ff_eval.empty()) {
                json ev = json::array();
                for (double l : ff_eval) ev.push_back({l, eval_fit_formula(cal.params, l)});
                j["eval"] = ev;
            }
            std::cout << j.dump(2) << "\n";
            return Ok;
        }
        if (emit->parsed()) {
            const std::size_t rows = figure_emit(emit_inputs, emit_figure, emit_out);
            std::fprintf(stderr, "%s: %zu rows (%s) -> %s\n", emit_figure.c_str(), rows,
                         figure_columns(emit_figure).c_str(), emit_out.c_str());
            return Ok;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
        return exit_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return NumericFailure;
    }
    return Ok;
}

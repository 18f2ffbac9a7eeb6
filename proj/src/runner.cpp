#include "qbm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qbm/basis.hpp"
#include "qbm/error.hpp"
#include "qbm/hash.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) config_error(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* a : allowed) known = known || it.key() == a;
        if (!known) config_error("unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        config_error("bad value for '" + std::string(key) + "' in " + where);
    }
}

json spec_json(const SystemSpec& s) {
    return {{"dimension", s.dimension},
            {"coupling", s.coupling},
            {"symmetry", to_string(s.symmetry)},
            {"softening", s.softening},
            {"exponent", s.interaction_exponent}};
}

SystemSpec spec_from(const json& j) {
    check_keys(j, "system", {"dimension", "coupling", "symmetry", "softening", "exponent"});
    SystemSpec s;
    read(j, "dimension", s.dimension, "system");
    read(j, "coupling", s.coupling, "system");
    read(j, "softening", s.softening, "system");
    read(j, "exponent", s.interaction_exponent, "system");
    std::string sym = to_string(s.symmetry);
    read(j, "symmetry", sym, "system");
    s.symmetry = symmetry_from_string(sym);
    s.validate();
    return s;
}

json solver_json(const SolverSettings& s) {
    return {{"method", to_string(s.method)},
            {"points", s.points},
            {"extent", s.extent},
            {"com_points", s.com_points},
            {"com_extent", s.com_extent},
            {"dt", s.dt},
            {"basis_dt", s.basis_dt},
            {"basis_size", s.basis_size},
            {"com_basis_size", s.com_basis_size},
            {"single_particle", s.single_particle},
            {"ground", {{"dtau", s.ground.dtau}, {"tolerance", s.ground.tolerance}, {"max_steps", s.ground.max_steps}}}};
}

SolverSettings solver_from(const json& j) {
    check_keys(j, "solver",
               {"method", "points", "extent", "com_points", "com_extent", "dt", "basis_dt", "basis_size",
                "com_basis_size", "single_particle", "ground"});
    SolverSettings s;
    std::string method = to_string(s.method);
    read(j, "method", method, "solver");
    s.method = method_from_string(method);
    read(j, "points", s.points, "solver");
    read(j, "extent", s.extent, "solver");
    read(j, "com_points", s.com_points, "solver");
    read(j, "com_extent", s.com_extent, "solver");
    read(j, "dt", s.dt, "solver");
    read(j, "basis_dt", s.basis_dt, "solver");
    read(j, "basis_size", s.basis_size, "solver");
    read(j, "com_basis_size", s.com_basis_size, "solver");
    read(j, "single_particle", s.single_particle, "solver");
    if (j.contains("ground")) {
        const json& g = j.at("ground");
        check_keys(g, "solver.ground", {"dtau", "tolerance", "max_steps"});
        read(g, "dtau", s.ground.dtau, "solver.ground");
        read(g, "tolerance", s.ground.tolerance, "solver.ground");
        read(g, "max_steps", s.ground.max_steps, "solver.ground");
    }
    if (s.points < 5 || s.com_points < 5) config_error("grids need at least 5 points");
    if (s.extent < 0.0 || !(s.com_extent > 0.0)) config_error("grid extents must be positive");
    if (!(s.dt > 0.0) || !(s.basis_dt > 0.0)) config_error("time steps must be positive");
    if (s.basis_size < 2 || s.com_basis_size < 2 || s.single_particle < 2) config_error("basis sizes must be at least 2");
    if (!(s.ground.dtau > 0.0) || !(s.ground.tolerance > 0.0) || s.ground.max_steps < 1)
        config_error("bad ground-state settings");
    return s;
}

json protocol_json(const ExcitationProtocol& p) {
    if (const auto* s = std::get_if<SwitchOff>(&p))
        return {{"type", "switch_off"}, {"t_on", s->t_on}, {"duration", s->duration}};
    if (const auto* m = std::get_if<Modulation>(&p))
        return {{"type", "modulation"},
                {"depth", m->depth},
                {"center", m->center},
                {"width", m->width},
                {"frequency", m->frequency}};
    return {{"type", "none"}};
}

ExcitationProtocol protocol_from(const json& j) {
    if (!j.is_object()) config_error("excitation must be an object");
    std::string type = "switch_off";
    read(j, "type", type, "excitation");
    ExcitationProtocol p;
    if (type == "switch_off") {
        check_keys(j, "excitation", {"type", "t_on", "duration"});
        SwitchOff s;
        read(j, "t_on", s.t_on, "excitation");
        read(j, "duration", s.duration, "excitation");
        p = s;
    } else if (type == "modulation") {
        check_keys(j, "excitation", {"type", "depth", "center", "width", "frequency"});
        Modulation m;
        read(j, "depth", m.depth, "excitation");
        read(j, "center", m.center, "excitation");
        read(j, "width", m.width, "excitation");
        read(j, "frequency", m.frequency, "excitation");
        p = m;
    } else if (type == "none") {
        check_keys(j, "excitation", {"type"});
    } else {
        config_error("unknown excitation type '" + type + "'");
    }
    validate(p);
    return p;
}

json config_json(const RunConfig& c) {
    return {{"system", spec_json(c.spec)},
            {"solver", solver_json(c.solver)},
            {"excitation", protocol_json(c.protocol)},
            {"run_length", c.run_length > 0.0 ? c.run_length : default_run_length(c.protocol)},
            {"sample_interval", c.sample_interval},
            {"sweep",
             {{"couplings", c.sweep.couplings},
              {"frequencies", c.sweep.frequencies},
              {"mode", c.sweep.mode == SweepMode::Time ? "time" : "spectral"}}},
            {"output_dir", c.output_dir},
            {"workers", c.workers},
            {"convergence_check", c.convergence_check},
            {"convergence_tolerance", c.convergence_tolerance},
            {"cache_dir", c.cache_dir},
            {"deterministic", true}};
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Config, "cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Config, "cannot write '" + path + "'");
    out << text;
}

InteractionCache& cache_for(const std::string& dir) {
    if (dir.empty()) return default_interaction_cache();
    static std::mutex mutex;
    static std::map<std::string, std::unique_ptr<InteractionCache>> caches;
    std::lock_guard lock(mutex);
    auto& c = caches[dir];
    if (!c) {
        ensure_dir(dir);
        c = std::make_unique<InteractionCache>(dir);
    }
    return *c;
}

std::string kind_name(const std::exception& e) {
    if (const auto* q = dynamic_cast<const Error*>(&e)) return to_string(q->kind());
    return "numeric";
}

RunConfig refined(const RunConfig& c) {
    RunConfig r = c;
    SolverSettings& s = r.solver;
    switch (s.method) {
        case Method::Grid:
        case Method::TwoParticleGrid:
            s.points = static_cast<int>(std::lround(1.5 * s.points)) | 1;
            s.com_points = static_cast<int>(std::lround(1.5 * s.com_points)) | 1;
            s.dt *= 0.5;
            break;
        case Method::Basis:
            s.basis_size += 50;
            s.com_basis_size += 10;
            break;
        case Method::TwoParticleBasis: s.single_particle += 5; break;
    }
    return r;
}

std::string resolution_label(const SolverSettings& s) {
    std::ostringstream os;
    switch (s.method) {
        case Method::Grid:
        case Method::TwoParticleGrid: os << "points=" << s.points << " dt=" << s.dt; break;
        case Method::Basis: os << "basis_size=" << s.basis_size << " com_basis_size=" << s.com_basis_size; break;
        case Method::TwoParticleBasis: os << "single_particle=" << s.single_particle; break;
    }
    return os.str();
}

ModeReport report_from_fit(const TwoModeFit& f, const std::vector<SpectralPeak>& peaks) {
    ModeReport m;
    m.omega_r = f.omega_r;
    m.omega_R = f.omega_R;
    m.a = f.a;
    m.b = f.b;
    const double total = f.a * f.a + f.b * f.b;
    if (total > 0.0) {
        m.weight_r = f.a * f.a / total;
        m.weight_R = f.b * f.b / total;
    }
    m.residual_rms = f.residual_rms;
    m.merged = f.merged;
    for (const auto& p : peaks) m.fft_frequencies.push_back(p.frequency);
    m.source = "fit";
    return m;
}

// A fit plus the periodogram peaks of the post-excitation U_pot channel.
void analyse(RunRecord& rec, const ExcitationProtocol& protocol) {
    SimulationResult r;
    r.series = rec.series;
    rec.fit = fit_breathing_modes(r, protocol);
    const double start = excitation_end(protocol);
    const auto& t = rec.series.times;
    std::size_t first = 0;
    while (first < t.size() && t[first] <= start) ++first;
    const auto& u = rec.series.channel("U_pot");
    const auto peaks = fft_peaks(std::span(t).subspan(first), std::span(u).subspan(first), 2);
    rec.modes = report_from_fit(rec.fit, peaks);
}

json fit_json(const TwoModeFit& f) {
    return {{"a", f.a},
            {"b", f.b},
            {"omega_r", f.omega_r},
            {"omega_R", f.omega_R},
            {"t0", f.t0},
            {"t0_prime", f.t0_prime},
            {"offset", f.offset},
            {"residual_rms", f.residual_rms},
            {"single_mode_residual_rms", f.single_mode_residual_rms},
            {"resolution", f.resolution},
            {"merged", f.merged},
            {"converged", f.converged}};
}

TwoModeFit fit_from(const json& j) {
    TwoModeFit f;
    f.a = j.value("a", 0.0);
    f.b = j.value("b", 0.0);
    f.omega_r = j.value("omega_r", 0.0);
    f.omega_R = j.value("omega_R", 0.0);
    f.t0 = j.value("t0", 0.0);
    f.t0_prime = j.value("t0_prime", 0.0);
    f.offset = j.value("offset", 0.0);
    f.merged = j.value("merged", false);
    return f;
}

}  // namespace

SimulationConfig RunConfig::simulation() const {
    SimulationConfig c;
    c.spec = spec;
    c.solver = solver;
    c.protocol = protocol;
    c.run_length = run_length;
    c.sample_interval = sample_interval;
    c.cache = &cache_for(cache_dir);
    return c;
}

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(std::string("configuration is not valid JSON: ") + e.what());
    }
    check_keys(j, "configuration",
               {"system", "solver", "excitation", "run_length", "sample_interval", "sweep", "output_dir", "workers",
                "convergence_check", "convergence_tolerance", "cache_dir", "deterministic"});
    RunConfig c;
    if (j.contains("system")) c.spec = spec_from(j.at("system"));
    if (j.contains("solver")) c.solver = solver_from(j.at("solver"));
    if (j.contains("excitation")) c.protocol = protocol_from(j.at("excitation"));
    read(j, "run_length", c.run_length, "configuration");
    read(j, "sample_interval", c.sample_interval, "configuration");
    read(j, "output_dir", c.output_dir, "configuration");
    read(j, "workers", c.workers, "configuration");
    read(j, "convergence_check", c.convergence_check, "configuration");
    read(j, "convergence_tolerance", c.convergence_tolerance, "configuration");
    read(j, "cache_dir", c.cache_dir, "configuration");
    bool deterministic = true;
    read(j, "deterministic", deterministic, "configuration");
    if (!deterministic) config_error("only deterministic runs are supported");
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, "sweep", {"couplings", "frequencies", "mode"});
        read(s, "couplings", c.sweep.couplings, "sweep");
        read(s, "frequencies", c.sweep.frequencies, "sweep");
        std::string mode = "time";
        read(s, "mode", mode, "sweep");
        if (mode == "time") c.sweep.mode = SweepMode::Time;
        else if (mode == "spectral") c.sweep.mode = SweepMode::Spectral;
        else config_error("sweep mode must be 'time' or 'spectral'");
        for (double l : c.sweep.couplings)
            if (!(l >= 0.0) || !std::isfinite(l)) config_error("sweep couplings must be finite and non-negative");
        for (double w : c.sweep.frequencies)
            if (!(w > 0.0) || !std::isfinite(w)) config_error("scan frequencies must be positive");
    }
    if (c.run_length < 0.0) config_error("run_length must be non-negative");
    if (!(c.sample_interval > 0.0)) config_error("sample_interval must be positive");
    if (c.sample_interval > std::numbers::pi / 40.0)
        config_error("sample_interval must be at most pi/40 so both modes are sampled 20 times per period");
    if (c.workers < 0) config_error("workers must be non-negative");
    if (!(c.convergence_tolerance > 0.0)) config_error("convergence_tolerance must be positive");
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open configuration '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_run_config(os.str());
}

std::string to_json(const RunConfig& config, int indent) { return config_json(config).dump(indent); }

std::string config_hash(const RunConfig& config) {
    json j = config_json(config);
    j.erase("output_dir");
    j.erase("workers");
    j.erase("cache_dir");
    j.erase("sweep");
    return fnv1a_hex(j.dump());
}

RunRecord run_single(const RunConfig& config) {
    RunRecord rec;
    rec.coupling = config.spec.coupling;
    const char* stage = "config";
    try {
        config.spec.validate();
        rec.hash = config_hash(config);
        SimulationConfig sim = config.simulation();
        stage = "propagate";
        SimulationResult r = simulate(sim);
        rec.series = r.series;
        rec.ground_energy = r.ground_energy;
        rec.mapped = r.mapped;
        rec.norm_drift = r.norm_drift;
        rec.max_leakage = r.max_leakage;
        rec.parity_error = r.parity_error;
        rec.warnings = r.warnings;
        stage = "analysis";
        if (std::holds_alternative<SwitchOff>(config.protocol)) analyse(rec, config.protocol);
        else rec.modes.source = "none";
        if (std::holds_alternative<Modulation>(config.protocol)) rec.e_infinity = e_infinity(rec.series);
        if (config.convergence_check) {
            stage = "convergence";
            const RunConfig fine = refined(config);
            const SimulationResult rf = simulate(fine.simulation());
            auto& cv = rec.convergence;
            cv.checked = true;
            cv.resolutions = {resolution_label(config.solver), resolution_label(fine.solver)};
            const auto& u0 = rec.series.channel("U_pot");
            const auto& u1 = rf.series.channel("U_pot");
            for (std::size_t i = 0; i < std::min(u0.size(), u1.size()); ++i)
                cv.series_delta = std::max(cv.series_delta, std::abs(u0[i] - u1[i]));
            if (std::holds_alternative<SwitchOff>(config.protocol)) {
                const TwoModeFit f = fit_breathing_modes(rf, config.protocol);
                cv.omega_r_delta = std::abs(f.omega_r - rec.fit.omega_r);
                cv.omega_R_delta = std::abs(f.omega_R - rec.fit.omega_R);
            }
            cv.accepted = cv.series_delta < config.convergence_tolerance;
            if (!cv.accepted) {
                std::ostringstream os;
                os << "not converged: U_pot changes by " << cv.series_delta << " between resolutions";
                rec.warnings.push_back(os.str());
            }
        }
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.errors.push_back({stage, kind_name(e), e.what()});
    }
    if (!config.output_dir.empty()) {
        try {
            const std::string dir = (fs::path(config.output_dir) / ("run-" + (rec.hash.empty() ? "invalid" : rec.hash))).string();
            ensure_dir(dir);
            if (!rec.series.times.empty()) {
                rec.series_path = (fs::path(dir) / "series.dat").string();
                std::ofstream out(rec.series_path);
                write_series(out, rec.series, to_json(config, 1));
            }
            rec.summary_path = (fs::path(dir) / "summary.json").string();
            write_text(rec.summary_path, summary_json(rec, config));
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.errors.push_back({"output", kind_name(e), e.what()});
        }
    }
    return rec;
}

std::string summary_json(const RunRecord& rec, const RunConfig& config) {
    json errors = json::array();
    for (const auto& e : rec.errors) errors.push_back({{"stage", e.stage}, {"kind", e.kind}, {"message", e.message}});
    const auto& m = rec.modes;
    json j = {{"kind", "run"},
              {"hash", rec.hash},
              {"ok", rec.ok},
              {"config", config_json(config)},
              {"mapped", rec.mapped},
              {"ground_energy", rec.ground_energy},
              {"norm_drift", rec.norm_drift},
              {"max_leakage", rec.max_leakage},
              {"parity_error", rec.parity_error},
              {"modes",
               {{"omega_r", m.omega_r},
                {"omega_R", m.omega_R},
                {"a", m.a},
                {"b", m.b},
                {"weight_r", m.weight_r},
                {"weight_R", m.weight_R},
                {"residual_rms", m.residual_rms},
                {"merged", m.merged},
                {"fft_frequencies", m.fft_frequencies},
                {"source", m.source}}},
              {"fit", fit_json(rec.fit)},
              {"convergence",
               {{"checked", rec.convergence.checked},
                {"accepted", rec.convergence.accepted},
                {"resolutions", rec.convergence.resolutions},
                {"series_delta", rec.convergence.series_delta},
                {"omega_r_delta", rec.convergence.omega_r_delta},
                {"omega_R_delta", rec.convergence.omega_R_delta}}},
              {"errors", errors},
              {"warnings", rec.warnings},
              {"series", rec.series_path.empty() ? "" : "series.dat"}};
    if (std::holds_alternative<Modulation>(config.protocol)) j["e_infinity"] = rec.e_infinity;
    return j.dump(2) + "\n";
}

SweepResult run_sweep(const RunConfig& config) {
    if (config.sweep.couplings.empty()) config_error("a sweep needs at least one coupling");
    SweepResult result;
    result.points.resize(config.sweep.couplings.size());
    InteractionCache& cache = cache_for(config.cache_dir);
    parallel_for(config.sweep.couplings.size(), config.workers, [&](std::size_t i) {
        SweepPoint& p = result.points[i];
        RunConfig c = config;
        c.spec.coupling = config.sweep.couplings[i];
        c.sweep = {};
        c.workers = 1;
        if (!config.output_dir.empty()) c.output_dir = (fs::path(config.output_dir) / "points").string();
        p.coupling = c.spec.coupling;
        p.hash = config_hash(c);
        try {
            if (config.sweep.mode == SweepMode::Spectral) {
                const SectorGap g = sector_gap(c.spec, c.solver.basis_size, &cache);
                p.omega_r = g.gap;
                p.omega_R = 2.0;
                p.mapped = g.mapped;
                p.ok = true;
                return;
            }
            const RunRecord r = run_single(c);
            if (!r.ok || r.modes.source != "fit") {
                p.error = r.errors.empty() ? "no breathing-mode fit for this excitation" : r.errors.front().stage + ": " + r.errors.front().message;
                return;
            }
            p.omega_r = r.modes.omega_r;
            p.omega_R = r.modes.omega_R;
            p.weight_r = r.modes.weight_r;
            p.weight_R = r.modes.weight_R;
            p.mapped = r.mapped;
            p.ok = true;
        } catch (const std::exception& e) {
            p.error = e.what();
        }
    });
    for (const auto& p : result.points) result.partial = result.partial || !p.ok;

    if (!config.output_dir.empty()) {
        ensure_dir(config.output_dir);
        const std::string tag = "sweep-" + config_hash(config) + "-" +
                                fnv1a_hex(json(config.sweep.couplings).dump()).substr(0, 8);
        result.curve_path = (fs::path(config.output_dir) / (tag + ".dat")).string();
        std::ostringstream curve;
        curve << "# " << to_json(config, -1) << "\n# lambda omega_r omega_R weight_r weight_R ok\n";
        curve.precision(17);
        for (const auto& p : result.points)
            curve << p.coupling << " " << p.omega_r << " " << p.omega_R << " " << p.weight_r << " " << p.weight_R << " "
                  << (p.ok ? 1 : 0) << "\n";
        write_text(result.curve_path, curve.str());
        json pts = json::array();
        for (const auto& p : result.points)
            pts.push_back({{"lambda", p.coupling},
                           {"ok", p.ok},
                           {"omega_r", p.omega_r},
                           {"omega_R", p.omega_R},
                           {"weight_r", p.weight_r},
                           {"weight_R", p.weight_R},
                           {"mapped", p.mapped},
                           {"hash", p.hash},
                           {"error", p.error}});
        json j = {{"kind", "sweep"}, {"config", config_json(config)}, {"partial", result.partial}, {"points", pts},
                  {"curve", fs::path(result.curve_path).filename().string()}};
        result.summary_path = (fs::path(config.output_dir) / (tag + ".json")).string();
        write_text(result.summary_path, j.dump(2) + "\n");
    }
    return result;
}

ScanResult run_scan(const RunConfig& config) {
    if (!std::holds_alternative<Modulation>(config.protocol)) config_error("a scan needs a modulation excitation");
    if (config.sweep.frequencies.size() < 3) config_error("a scan needs at least 3 frequencies");
    ScanResult result;
    result.spectrum = scan_resonance(config.simulation(), config.sweep.frequencies, config.workers);
    if (!config.output_dir.empty()) {
        ensure_dir(config.output_dir);
        const std::string tag = "scan-" + config_hash(config) + "-" +
                                fnv1a_hex(json(config.sweep.frequencies).dump()).substr(0, 8);
        const auto& s = result.spectrum;
        result.spectrum_path = (fs::path(config.output_dir) / (tag + ".dat")).string();
        std::ostringstream out;
        out << "# " << to_json(config, -1) << "\n# omega_ext e_inf\n";
        out.precision(17);
        for (std::size_t i = 0; i < s.omegas.size(); ++i) out << s.omegas[i] << " " << s.e_inf[i] << "\n";
        write_text(result.spectrum_path, out.str());
        json peaks = json::array();
        for (const auto& p : s.peaks)
            peaks.push_back({{"center", p.center}, {"height", p.height}, {"area", p.area}, {"width", p.width}});
        json j = {{"kind", "scan"},
                  {"config", config_json(config)},
                  {"partial", s.partial},
                  {"failed", s.failed},
                  {"peaks", peaks},
                  {"spectrum", fs::path(result.spectrum_path).filename().string()}};
        result.summary_path = (fs::path(config.output_dir) / (tag + ".json")).string();
        write_text(result.summary_path, j.dump(2) + "\n");
    }
    return result;
}

// ---- figures

std::string figure_columns(const std::string& figure) {
    if (figure == "fig1") return "t dU_pot dabs_x fit_dU_pot";
    if (figure == "fig3") return "lambda omega_r omega_R area_r area_R";
    if (figure == "fig4") return "lambda kappa symmetric omega_r";
    if (figure == "fig5") return "lambda dimension symmetric omega_r omega_R";
    config_error("unknown figure '" + figure + "' (fig1, fig3, fig4, fig5)");
}

namespace {

struct Loaded {
    json j;
    fs::path dir;
};

std::vector<Loaded> load_summaries(const std::vector<std::string>& paths) {
    std::vector<Loaded> out;
    auto add = [&](const fs::path& p) {
        std::ifstream in(p);
        if (!in) config_error("cannot read summary '" + p.string() + "'");
        try {
            out.push_back({json::parse(in), p.parent_path()});
        } catch (const json::exception&) {
            config_error("'" + p.string() + "' is not a summary file");
        }
    };
    for (const auto& s : paths) {
        const fs::path p(s);
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::recursive_directory_iterator(p))
                if (e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) add(f);
        } else {
            add(p);
        }
    }
    return out;
}

const char* required_runs(const std::string& figure) {
    if (figure == "fig1") return "one 'run' summary with a switch_off excitation and a saved series";
    if (figure == "fig3") return "a 1D antisymmetric 'sweep' summary, optionally 'scan' summaries for peak areas";
    if (figure == "fig4") return "1D symmetric 'sweep' summaries with softening > 0 (plus an antisymmetric reference)";
    return "2D 'sweep' summaries for both symmetries (plus a 1D reference)";
}

std::string dump_row(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

}  // namespace

std::size_t figure_emit(const std::vector<std::string>& summary_paths, const std::string& figure,
                        const std::string& output_path) {
    const std::string columns = figure_columns(figure);
    const auto all = load_summaries(summary_paths);
    std::vector<std::string> rows;

    auto kind_is = [](const json& j, const char* k) { return j.value("kind", "") == k; };
    if (figure == "fig1") {
        for (const auto& s : all) {
            if (!kind_is(s.j, "run") || !s.j.value("ok", false) || s.j.value("series", "").empty()) continue;
            if (s.j["config"]["excitation"].value("type", "") != "switch_off") continue;
            std::ifstream in(s.dir / s.j.value("series", ""));
            const TimeSeries ts = read_series(in);
            const TwoModeFit f = fit_from(s.j["fit"]);
            const auto& u = ts.channel("U_pot");
            const auto& x = ts.channel("abs_x");
            const double t_end = s.j["config"]["excitation"].value("t_on", 0.0) +
                                 s.j["config"]["excitation"].value("duration", 0.0);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const double fit = ts.times[i] > t_end ? f(ts.times[i]) - u[0] : NAN;
                rows.push_back(dump_row({ts.times[i], u[i] - u[0], x[i] - x[0], fit}));
            }
            break;
        }
    } else if (figure == "fig3") {
        std::map<double, std::vector<ResonancePeak>> areas;
        for (const auto& s : all) {
            if (!kind_is(s.j, "scan")) continue;
            std::vector<ResonancePeak> peaks;
            for (const auto& p : s.j["peaks"]) peaks.push_back({p["center"], p["height"], p["area"], p["width"]});
            areas[s.j["config"]["system"]["coupling"].get<double>()] = peaks;
        }
        for (const auto& s : all) {
            if (!kind_is(s.j, "sweep")) continue;
            const json& sys = s.j["config"]["system"];
            if (sys["dimension"] != 1 || sys["symmetry"] != "antisymmetric") continue;
            for (const auto& p : s.j["points"]) {
                if (!p["ok"].get<bool>()) continue;
                const double l = p["lambda"], wr = p["omega_r"], wR = p["omega_R"];
                double ar = NAN, aR = NAN;
                auto it = areas.find(l);
                if (it != areas.end() && !it->second.empty()) {
                    auto nearest = [&](double w) {
                        return std::min_element(it->second.begin(), it->second.end(), [w](const auto& x, const auto& y) {
                                   return std::abs(x.center - w) < std::abs(y.center - w);
                               })->area;
                    };
                    ar = nearest(wr);
                    aR = nearest(wR);
                }
                rows.push_back(dump_row({l, wr, wR, ar, aR}));
            }
        }
    } else {
        const bool fig4 = figure == "fig4";
        bool have_target = false;
        for (const auto& s : all) {
            if (!kind_is(s.j, "sweep")) continue;
            const json& sys = s.j["config"]["system"];
            const int d = sys["dimension"];
            const bool sym = sys["symmetry"] == "symmetric";
            const double kappa = sys["softening"];
            if (fig4 && d != 1) continue;
            if (fig4 && sym && kappa > 0.0) have_target = true;
            if (!fig4 && d == 2) have_target = true;
            for (const auto& p : s.j["points"]) {
                if (!p["ok"].get<bool>()) continue;
                if (fig4) rows.push_back(dump_row({p["lambda"], kappa, sym ? 1.0 : 0.0, p["omega_r"]}));
                else rows.push_back(dump_row({p["lambda"], double(d), sym ? 1.0 : 0.0, p["omega_r"], p["omega_R"]}));
            }
        }
        if (!have_target) rows.clear();
    }
    if (rows.empty())
        config_error("no input covers " + figure + "; required: " + required_runs(figure));
    std::ostringstream out;
    out << "# " << figure << "\n# " << columns << "\n";
    for (const auto& r : rows) out << r << "\n";
    write_text(output_path, out.str());
    return rows.size();
}

}  // namespace qbm

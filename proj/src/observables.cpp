#include "qbm/observables.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "qbm/error.hpp"

namespace qbm {

TimeSeries::TimeSeries(std::vector<std::string> channel_names)
    : names(std::move(channel_names)), values(names.size()) {}

void TimeSeries::push(double t, const std::vector<double>& sample) {
    if (sample.size() != names.size()) throw Error(ErrorKind::Config, "sample does not match the channel count");
    if (!times.empty() && !(t > times.back())) throw Error(ErrorKind::Config, "sample times must increase");
    times.push_back(t);
    for (std::size_t c = 0; c < sample.size(); ++c) values[c].push_back(sample[c]);
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
    for (std::size_t c = 0; c < names.size(); ++c)
        if (names[c] == name) return values[c];
    throw Error(ErrorKind::Config, "unknown channel '" + name + "'");
}

void TimeSeries::validate() const {
    if (values.size() != names.size()) throw Error(ErrorKind::Config, "channel metadata mismatch");
    for (const auto& v : values)
        if (v.size() != times.size()) throw Error(ErrorKind::Config, "channel length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw Error(ErrorKind::Config, "times must be strictly increasing");
}

namespace {

template <class G>
double weighted(const GridWavefunction& psi, G g) {
    double num = 0.0, den = 0.0;
    if (psi.frame == Frame::TwoParticle) {
        const Grid& grid = psi.axes.at(0);
        const std::size_t n = static_cast<std::size_t>(grid.points);
        for (std::size_t i = 0; i < n; ++i) {
            const double x1 = grid.coordinate(static_cast<int>(i));
            for (std::size_t j = 0; j < n; ++j) {
                const double p = std::norm(psi.amplitudes[i * n + j]);
                num += p * g(x1, grid.coordinate(static_cast<int>(j)));
                den += p;
            }
        }
    } else {
        const Grid& grid = psi.axes.at(0);
        for (std::size_t j = 0; j < psi.amplitudes.size(); ++j) {
            const double p = std::norm(psi.amplitudes[j]);
            num += p * g(grid.coordinate(static_cast<int>(j)), 0.0);
            den += p;
        }
    }
    return num / den;
}

}  // namespace

double expectation_upot(const GridWavefunction& psi) {
    switch (psi.frame) {
        case Frame::TwoParticle: return weighted(psi, [](double a, double b) { return 0.5 * (a * a + b * b); });
        case Frame::Relative: return weighted(psi, [](double r, double) { return 0.25 * r * r; });
        case Frame::CenterOfMass: return weighted(psi, [](double x, double) { return x * x; });
    }
    return 0.0;
}

double expectation_absx(const GridWavefunction& psi) {
    if (psi.frame == Frame::TwoParticle)
        return weighted(psi, [](double a, double b) { return 0.5 * (std::abs(a) + std::abs(b)); });
    return weighted(psi, [](double x, double) { return std::abs(x); });
}

double total_energy(const GridWavefunction& psi, const SystemSpec& spec, double trap_factor) {
    if (psi.frame == Frame::TwoParticle)
        return build_two_particle_problem(spec, psi.axes.at(0)).expectation(psi.amplitudes, trap_factor);
    const LineHamiltonian h = psi.frame == Frame::CenterOfMass ? build_com_problem(psi.axes.at(0))
                              : psi.radial ? build_radial_problem(spec, psi.angular_momentum, psi.axes.at(0))
                                           : build_relative_problem(spec, psi.axes.at(0));
    return h.expectation(psi.amplitudes, trap_factor);
}

double e_infinity(const TimeSeries& series, const std::string& channel, double window) {
    const auto& v = series.channel(channel);
    if (v.empty()) throw Error(ErrorKind::Config, "empty series");
    const double start = series.times.back() - window;
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (series.times[i] >= start) {
            sum += v[i];
            ++count;
        }
    return sum / count;
}

void write_series(std::ostream& out, const TimeSeries& series, const std::string& header) {
    series.validate();
    if (!header.empty()) {
        std::istringstream lines(header);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << "\n";
    }
    out << "# t";
    for (const auto& n : series.names) out << " " << n;
    out << "\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.times[i];
        for (const auto& v : series.values) out << " " << v[i];
        out << "\n";
    }
}

TimeSeries read_series(std::istream& in, std::string* header) {
    std::string line, last_comment, head;
    std::vector<std::string> comments;
    TimeSeries series(std::vector<std::string>{});
    bool have_names = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        if (!have_names) {
            if (comments.empty()) throw Error(ErrorKind::Config, "series has no column header");
            std::istringstream cols(comments.back());
            std::string name;
            cols >> name;  // t
            std::vector<std::string> names;
            while (cols >> name) names.push_back(name);
            series = TimeSeries(names);
            for (std::size_t i = 0; i + 1 < comments.size(); ++i) head += comments[i] + (i + 2 < comments.size() ? "\n" : "");
            have_names = true;
        }
        std::istringstream row(line);
        double t;
        row >> t;
        std::vector<double> sample(series.names.size());
        for (auto& v : sample)
            if (!(row >> v)) throw Error(ErrorKind::Config, "short row in series");
        series.push(t, sample);
    }
    if (header) *header = head;
    return series;
}

}  // namespace qbm

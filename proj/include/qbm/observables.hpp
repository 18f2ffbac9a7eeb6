#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qbm/grid.hpp"
#include "qbm/model.hpp"

namespace qbm {

/// Uniformly sampled channels sharing one time axis.
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // one vector per channel

    explicit TimeSeries(std::vector<std::string> channel_names = {"U_pot", "abs_x", "E_tot", "norm"});

    void push(double t, const std::vector<double>& sample);
    const std::vector<double>& channel(const std::string& name) const;
    std::size_t size() const { return times.size(); }
    /// Throws Error(Config) on unequal lengths or non-increasing times.
    void validate() const;
};

/// Trap energy sum_i r_i^2/2 of the wavefunction's frame at unit trap
/// factor: (x1^2 + x2^2)/2 on the two-particle grid, r^2/4 on relative
/// problems, R^2 on one center-of-mass component.
double expectation_upot(const GridWavefunction& psi);
/// (|x1| + |x2|)/2 on the two-particle grid, the mean separation <|r|> on
/// relative problems, <|R|> on a center-of-mass component.
double expectation_absx(const GridWavefunction& psi);
/// <H> with the trap scaled by trap_factor.
double total_energy(const GridWavefunction& psi, const SystemSpec& spec, double trap_factor);

/// Mean of a channel over the final `window` time units.
double e_infinity(const TimeSeries& series, const std::string& channel = "E_tot", double window = 50.0);

/// Columnar text: '#'-prefixed header lines (the first carries `header`,
/// typically the resolved config as JSON), a column-name line, then rows.
void write_series(std::ostream& out, const TimeSeries& series, const std::string& header = {});
TimeSeries read_series(std::istream& in, std::string* header = nullptr);

}  // namespace qbm

#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qbm {

/// Trap switched off on [t_on, t_on + duration].
struct SwitchOff {
    double t_on = 1.0;
    double duration = 0.1;
};

/// Trap curvature modulated by 1 + beta(t),
/// beta(t) = depth * exp(-(t - center)^2 / (2 width^2)) * sin(frequency t).
/// `width` is the standard deviation of the envelope in time units.
struct Modulation {
    double depth = 5e-3;
    double center = 240.0;
    double width = 100.0;
    double frequency = 2.0;
};

using ExcitationProtocol = std::variant<std::monostate, SwitchOff, Modulation>;

/// Multiplier of the harmonic trap at time t.
double trap_factor(const ExcitationProtocol& p, double t);

/// Throws Error(Config) for invalid parameters; returns advisory warnings.
std::vector<std::string> validate(const ExcitationProtocol& p);

/// Time after which the protocol no longer acts (envelope below 1e-6 of its peak).
double excitation_end(const ExcitationProtocol& p);

/// Minimum run length for a protocol: SwitchOff -> t_on + duration + 400,
/// Modulation -> center + 4 width + 100, none -> 100.
double default_run_length(const ExcitationProtocol& p);

const char* protocol_name(const ExcitationProtocol& p);

}  // namespace qbm

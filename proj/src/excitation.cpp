#include "qbm/excitation.hpp"

#include <cmath>

#include "qbm/error.hpp"

namespace qbm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double trap_factor(const ExcitationProtocol& p, double t) {
    return std::visit(overloaded{
                          [](std::monostate) { return 1.0; },
                          [t](const SwitchOff& s) { return (t >= s.t_on && t <= s.t_on + s.duration) ? 0.0 : 1.0; },
                          [t](const Modulation& m) {
                              const double z = (t - m.center) / m.width;
                              return 1.0 + m.depth * std::exp(-0.5 * z * z) * std::sin(m.frequency * t);
                          },
                      },
                      p);
}

std::vector<std::string> validate(const ExcitationProtocol& p) {
    std::vector<std::string> warnings;
    if (const auto* s = std::get_if<SwitchOff>(&p)) {
        if (!(s->duration > 0.0)) throw Error(ErrorKind::Config, "switch-off duration must be positive");
        if (s->t_on < 0.0) throw Error(ErrorKind::Config, "switch-off time must be non-negative");
        if (s->duration > 0.5)
            warnings.push_back("switch-off longer than 0.5 is not spectrally broad compared to the trap frequency");
    } else if (const auto* m = std::get_if<Modulation>(&p)) {
        if (!(m->width > 0.0)) throw Error(ErrorKind::Config, "modulation width must be positive");
        if (!(m->frequency > 0.0)) throw Error(ErrorKind::Config, "modulation frequency must be positive");
        if (m->depth < 0.0 || m->depth >= 1.0) throw Error(ErrorKind::Config, "modulation depth must lie in [0, 1)");
        if (m->depth > 0.05) warnings.push_back("modulation depth above 0.05 leaves the linear-response regime");
    }
    return warnings;
}

double excitation_end(const ExcitationProtocol& p) {
    if (const auto* s = std::get_if<SwitchOff>(&p)) return s->t_on + s->duration;
    if (const auto* m = std::get_if<Modulation>(&p)) return m->center + std::sqrt(2.0 * std::log(1e6)) * m->width;
    return 0.0;
}

double default_run_length(const ExcitationProtocol& p) {
    if (const auto* s = std::get_if<SwitchOff>(&p)) return s->t_on + s->duration + 400.0;
    if (const auto* m = std::get_if<Modulation>(&p)) return m->center + 4.0 * m->width + 100.0;
    return 100.0;
}

const char* protocol_name(const ExcitationProtocol& p) {
    if (std::holds_alternative<SwitchOff>(p)) return "switch_off";
    if (std::holds_alternative<Modulation>(p)) return "modulation";
    return "none";
}

}  // namespace qbm

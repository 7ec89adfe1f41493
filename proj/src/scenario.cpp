#include "rtbp/scenario.hpp"
#include "rtbp/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rtbp {

void validate(const ScenarioConfig& cfg, std::vector<std::string>* warnings) {
    auto fail = [](const std::string& what) { throw ConfigError("scenario: " + what); };

    if (!(cfg.G > 0.0)) fail("G must be > 0");
    if (!(cfg.m1 > 0.0) || !(cfg.m2 > 0.0) || !(cfg.m3 > 0.0))
        fail("all masses must be > 0");
    if (!(cfg.r1o > 0.0) || !(cfg.r2o > 0.0)) fail("r1o and r2o must be > 0");
    if (!(cfg.dt_out > 0.0)) fail("dt_out must be > 0");
    if (!(cfg.t_end > cfg.t0)) fail("t_end must be > t0");
    for (double v : {cfg.rdot1o, cfg.rdot2o, cfg.theta1o, cfg.theta2o, cfg.thetadot0})
        if (!std::isfinite(v)) fail("non-finite field");

    double offset = cfg.theta2o - cfg.theta1o - std::numbers::pi;
    if (std::abs(offset) > 1e-9)
        fail("theta2o must equal theta1o + pi (restricted geometry), off by " +
             std::to_string(offset) + " rad");

    if (warnings) {
        double mmin = std::min(cfg.m1, cfg.m2);
        if (cfg.m3 > 1e-3 * mmin)
            warnings->push_back("m3 is not small against the primaries (m3/min(m1,m2) = " +
                                std::to_string(cfg.m3 / mmin) +
                                "); the restricted assumption is strained");
    }
}

} // namespace rtbp

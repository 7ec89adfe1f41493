#pragma once
#include "rtbp/oracle.hpp"
#include "rtbp/scenario.hpp"
#include "rtbp/third_body.hpp"
#include "rtbp/two_body.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace rtbp {

/// Channels scored against the oracle, in fixed order.
enum Channel { ChR = 0, ChR1, ChTheta1, ChR2, ChTheta2, ChR3, ChTheta3, ChPos3, kNumChannels };
const char* channel_name(int ch);

/// Per-sample errors for every channel plus the validity flag.
struct ErrorSeries {
    std::vector<double> t;
    std::array<std::vector<double>, kNumChannels> abs_err;
    std::array<std::vector<double>, kNumChannels> rel_err;  // abs / max(|oracle|, 1e-30)
    std::vector<bool> in_validity_window;
};

struct ComparisonSummary {
    std::array<double, kNumChannels> max_rel_err_in_window{};
    std::array<double, kNumChannels> rms_rel_err_in_window{};
    double window_t_start = 0.0;
    double window_t_end = 0.0;     // end of the largest valid prefix
    long window_samples = 0;
    bool empty_window = false;
    ValidityReport validity;
    std::string notes;
};

/// One trajectory sample of the closed forms (plus derived Cartesian).
struct ClosedFormSample {
    double t = 0.0;
    double r = 0.0;
    double r1 = 0.0, theta1 = 0.0;
    double r2 = 0.0, theta2 = 0.0;
    double r3 = 0.0, theta3 = 0.0;
};

/// Evaluates the closed forms on the uniform output grid; theta3 is
/// continuity-tracked in time order. `branch_jumps`, when non-null,
/// receives the arccos branch-switch count.
std::vector<ClosedFormSample> sample_closed_form(const DerivedConstants& dc,
                                                 const ScenarioConfig& cfg,
                                                 int* branch_jumps = nullptr);

/// Initial Cartesian state of the oracle run: primaries from the scenario
/// polar state, m3 from the closed form's own t0 position with one-sided
/// finite-difference velocity (step dt_out/100).
oracle::CartesianState oracle_initial_state(const DerivedConstants& dc,
                                            const ScenarioConfig& cfg);

/// Full comparison pipeline: closed forms vs the integrated oracle,
/// sample-aligned, with summary statistics restricted to the largest valid
/// prefix. Emits an EmptyWindowWarning note when no sample passes the gate.
std::pair<ErrorSeries, ComparisonSummary> run_comparison(const ScenarioConfig& cfg,
                                                         const oracle::IntegratorConfig& icfg);

/// Writers for the CLI file contract.
void write_error_series_csv(std::ostream& os, const ErrorSeries& es);
void write_summary(std::ostream& os, const ComparisonSummary& s);

} // namespace rtbp

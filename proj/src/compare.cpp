#include "rtbp/compare.hpp"
#include "rtbp/errors.hpp"
#include "rtbp/numfmt.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace rtbp {

namespace {

constexpr double kRelFloor = 1e-30;

long output_sample_count(const ScenarioConfig& cfg) {
    return std::llround(std::floor((cfg.t_end - cfg.t0) / cfg.dt_out + 1e-9));
}

// Unwraps a raw atan2 series into a continuous one anchored within pi of
// `anchor` at the first sample (closed form and oracle share t0 state, so
// a shared anchor keeps the channels comparable without 2 pi jumps).
std::vector<double> unwrap_angles(const std::vector<double>& raw, double anchor) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> out(raw.size());
    if (raw.empty()) return out;
    double offset = two_pi * std::round((anchor - raw[0]) / two_pi);
    out[0] = raw[0] + offset;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        double prev = out[i - 1];
        double cand = raw[i] + offset;
        offset += two_pi * std::round((prev - cand) / two_pi);
        out[i] = raw[i] + offset;
    }
    return out;
}

} // namespace

const char* channel_name(int ch) {
    switch (ch) {
        case ChR: return "r";
        case ChR1: return "r1";
        case ChTheta1: return "theta1";
        case ChR2: return "r2";
        case ChTheta2: return "theta2";
        case ChR3: return "r3";
        case ChTheta3: return "theta3";
        case ChPos3: return "pos3";
        default: return "?";
    }
}

std::vector<ClosedFormSample> sample_closed_form(const DerivedConstants& dc,
                                                 const ScenarioConfig& cfg,
                                                 int* branch_jumps) {
    long n = output_sample_count(cfg);
    std::vector<ClosedFormSample> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    ThirdBodyTrajectory third(dc, cfg);
    for (long k = 0; k <= n; ++k) {
        double t = cfg.t0 + static_cast<double>(k) * cfg.dt_out;
        ClosedFormSample s;
        s.t = t;
        s.r = r_of_t(dc, t);
        s.r1 = r1_of_t(dc, cfg, t);
        s.r2 = r2_of_t(dc, cfg, t);
        s.theta1 = theta1_of_t(dc, cfg, t);
        s.theta2 = theta2_of_t(dc, cfg, t);
        ThirdBodyState ts = third.sample(t);
        s.r3 = ts.r3;
        s.theta3 = ts.theta3;
        out.push_back(s);
    }
    if (branch_jumps) *branch_jumps = third.branch_jumps();
    return out;
}

oracle::CartesianState oracle_initial_state(const DerivedConstants& dc,
                                            const ScenarioConfig& cfg) {
    oracle::CartesianState st;
    st.t = cfg.t0;
    st.pos[0] = {cfg.r1o * std::cos(cfg.theta1o), cfg.r1o * std::sin(cfg.theta1o)};
    st.pos[1] = {cfg.r2o * std::cos(cfg.theta2o), cfg.r2o * std::sin(cfg.theta2o)};
    auto polar_vel = [&](double r, double th, double rd, double thd) -> oracle::Vec2 {
        return {rd * std::cos(th) - r * thd * std::sin(th),
                rd * std::sin(th) + r * thd * std::cos(th)};
    };
    st.vel[0] = polar_vel(cfg.r1o, cfg.theta1o, cfg.rdot1o, cfg.thetadot0);
    st.vel[1] = polar_vel(cfg.r2o, cfg.theta2o, cfg.rdot2o, cfg.thetadot0);

    // m3 starts on the closed form's own trajectory; velocity from a
    // one-sided finite difference with step dt_out/100.
    double d = cfg.dt_out / 100.0;
    ThirdBodyTrajectory third(dc, cfg);
    ThirdBodyState s0 = third.sample(cfg.t0);
    ThirdBodyState s1 = third.sample(cfg.t0 + d);
    oracle::Vec2 p0{s0.r3 * std::cos(s0.theta3), s0.r3 * std::sin(s0.theta3)};
    oracle::Vec2 p1{s1.r3 * std::cos(s1.theta3), s1.r3 * std::sin(s1.theta3)};
    st.pos[2] = p0;
    st.vel[2] = (1.0 / d) * (p1 - p0);
    return st;
}

std::pair<ErrorSeries, ComparisonSummary> run_comparison(const ScenarioConfig& cfg,
                                                         const oracle::IntegratorConfig& icfg) {
    DerivedConstants dc = derive_constants(cfg);
    std::vector<ClosedFormSample> cf = sample_closed_form(dc, cfg);
    oracle::Masses masses{cfg.m1, cfg.m2, cfg.m3};
    auto traj = oracle::integrate(oracle_initial_state(dc, cfg), masses, cfg.G, icfg,
                                  cfg.t_end, cfg.dt_out);
    const std::size_t n = cf.size();
    if (traj.size() != n)
        throw Error("comparison: oracle and closed-form sample counts differ");

    // oracle channels, with a shared unwrapping pass for the angles
    std::vector<double> th1_raw(n), th2_raw(n), th3_raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = traj[i].state.pos;
        th1_raw[i] = std::atan2(p[0].y, p[0].x);
        th2_raw[i] = std::atan2(p[1].y, p[1].x);
        th3_raw[i] = std::atan2(p[2].y, p[2].x);
    }
    std::vector<double> th1 = unwrap_angles(th1_raw, cf[0].theta1);
    std::vector<double> th2 = unwrap_angles(th2_raw, cf[0].theta2);
    std::vector<double> th3 = unwrap_angles(th3_raw, cf[0].theta3);

    ErrorSeries es;
    es.t.resize(n);
    for (auto& v : es.abs_err) v.resize(n);
    for (auto& v : es.rel_err) v.resize(n);
    es.in_validity_window.resize(n);

    double r_min_limit = dc.A / std::abs(dc.B);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj[i].state;
        es.t[i] = cf[i].t;
        double orc[kNumChannels];
        double cfv[kNumChannels];
        orc[ChR] = oracle::norm(s.pos[1] - s.pos[0]);
        orc[ChR1] = oracle::norm(s.pos[0]);
        orc[ChR2] = oracle::norm(s.pos[1]);
        orc[ChR3] = oracle::norm(s.pos[2]);
        orc[ChTheta1] = th1[i];
        orc[ChTheta2] = th2[i];
        orc[ChTheta3] = th3[i];
        orc[ChPos3] = oracle::norm(s.pos[2]);
        cfv[ChR] = cf[i].r;
        cfv[ChR1] = cf[i].r1;
        cfv[ChR2] = cf[i].r2;
        cfv[ChR3] = cf[i].r3;
        cfv[ChTheta1] = cf[i].theta1;
        cfv[ChTheta2] = cf[i].theta2;
        cfv[ChTheta3] = cf[i].theta3;
        for (int ch = 0; ch < kNumChannels; ++ch) {
            if (ch == ChPos3) continue;
            es.abs_err[ch][i] = std::abs(cfv[ch] - orc[ch]);
            es.rel_err[ch][i] = es.abs_err[ch][i] / std::max(std::abs(orc[ch]), kRelFloor);
        }
        oracle::Vec2 p3_cf{cf[i].r3 * std::cos(cf[i].theta3), cf[i].r3 * std::sin(cf[i].theta3)};
        es.abs_err[ChPos3][i] = oracle::norm(p3_cf - s.pos[2]);
        es.rel_err[ChPos3][i] = es.abs_err[ChPos3][i] / std::max(orc[ChPos3], kRelFloor);

        double margin_r = cf[i].r;
        bool ok = dc.B > 0.0 && margin_r > r_min_limit &&
                  std::abs(theta_dot_of_t(dc, cf[i].t)) < 1.0;
        es.in_validity_window[i] = ok;
    }

    ComparisonSummary sum;
    sum.validity = check_validity(cfg, dc);

    // the window is the largest valid prefix
    std::size_t win = 0;
    while (win < n && es.in_validity_window[win]) ++win;
    sum.window_samples = static_cast<long>(win);
    sum.empty_window = win == 0;
    sum.window_t_start = cfg.t0;
    sum.window_t_end = win > 0 ? es.t[win - 1] : cfg.t0;

    auto stats_over = [&](std::size_t count, int ch, double& mx, double& rms) {
        mx = 0.0;
        rms = 0.0;
        if (count == 0) return;
        for (std::size_t i = 0; i < count; ++i) {
            mx = std::max(mx, es.rel_err[ch][i]);
            rms += es.rel_err[ch][i] * es.rel_err[ch][i];
        }
        rms = std::sqrt(rms / static_cast<double>(count));
    };
    for (int ch = 0; ch < kNumChannels; ++ch)
        stats_over(win, ch, sum.max_rel_err_in_window[ch], sum.rms_rel_err_in_window[ch]);

    if (sum.empty_window) {
        std::string notes = "EmptyWindowWarning: no sample passes the validity gate; "
                            "whole-horizon stats:";
        for (int ch = 0; ch < kNumChannels; ++ch) {
            double mx, rms;
            stats_over(n, ch, mx, rms);
            notes += " max_rel_err_" + std::string(channel_name(ch)) + "=" + fmt_g17(mx);
        }
        sum.notes = notes;
    }
    return {std::move(es), std::move(sum)};
}

void write_error_series_csv(std::ostream& os, const ErrorSeries& es) {
    os << "t";
    for (int ch = 0; ch < kNumChannels; ++ch)
        os << ",abs_err_" << channel_name(ch) << ",rel_err_" << channel_name(ch);
    os << ",in_window\n";
    for (std::size_t i = 0; i < es.t.size(); ++i) {
        os << fmt_g17(es.t[i]);
        for (int ch = 0; ch < kNumChannels; ++ch)
            os << ',' << fmt_g17(es.abs_err[ch][i]) << ',' << fmt_g17(es.rel_err[ch][i]);
        os << ',' << (es.in_validity_window[i] ? 1 : 0) << '\n';
    }
}

void write_summary(std::ostream& os, const ComparisonSummary& s) {
    for (int ch = 0; ch < kNumChannels; ++ch) {
        os << "max_rel_err_" << channel_name(ch) << "_in_window="
           << fmt_g17(s.max_rel_err_in_window[ch]) << '\n';
        os << "rms_rel_err_" << channel_name(ch) << "_in_window="
           << fmt_g17(s.rms_rel_err_in_window[ch]) << '\n';
    }
    os << "window_t_start=" << fmt_g17(s.window_t_start) << '\n';
    os << "window_t_end=" << fmt_g17(s.window_t_end) << '\n';
    os << "window_samples=" << s.window_samples << '\n';
    os << "empty_window=" << (s.empty_window ? 1 : 0) << '\n';
    os << "b_positive=" << (s.validity.b_positive ? 1 : 0) << '\n';
    os << "theta_rate_ok=" << (s.validity.theta_rate_ok ? 1 : 0) << '\n';
    os << "radius_ok=" << (s.validity.radius_ok ? 1 : 0) << '\n';
    os << "binomial_margin=" << fmt_g17(s.validity.binomial_margin) << '\n';
    os << "overall=" << (s.validity.overall ? 1 : 0) << '\n';
    os << "notes=" << s.notes << '\n';
}

} // namespace rtbp

#include "pearcey/pde_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pearcey/parallel.hpp"

namespace pearcey {

namespace {

// Endpoint coordinates per slice, preserving the flattened order.
std::vector<std::vector<double>> slice_endpoint_xs(const RegionFamily& regions, int m) {
    std::vector<std::vector<double>> xs(m);
    for (const auto& ep : regions.endpoints()) xs[ep.slice].push_back(ep.xi);
    return xs;
}

RegionFamily shift_endpoint(const RegionFamily& regions, int slice, int w, double delta) {
    RegionFamily out = regions;
    int idx = (w - 1) / 2;  // interval index; even w-1 -> lo, odd -> hi
    Interval& iv = out.slices[slice][idx];
    if ((w - 1) % 2 == 0)
        iv.lo += delta;
    else
        iv.hi += delta;
    return out;
}

} // namespace

PdeState assemble_state(const MatrixKernel& kernel, const RegionFamily& regions,
                        int nodes_per_interval) {
    const int m = kernel.slices();
    regions.validate(m);
    PdeState state;
    state.endpoints = regions.endpoints();
    const int e = state.size();
    for (const auto& ep : state.endpoints) state.tau.push_back(kernel.tau(ep.slice));
    if (e == 0) return state;

    NystromSystem system(kernel, regions, nodes_per_interval);
    auto xs = slice_endpoint_xs(regions, m);
    std::vector<int> offset(m, 0);
    {
        int run = 0;
        for (int k = 0; k < m; ++k) {
            offset[k] = run;
            run += static_cast<int>(xs[k].size());
        }
    }

    state.q.resize(e);
    state.q1.resize(e);
    state.q2.resize(e);
    state.p.resize(e);
    state.p1.resize(e);
    state.p2.resize(e);
    for (int k = 0; k < m; ++k) {
        if (xs[k].empty()) continue;
        std::vector<Eigen::VectorXd> qv, pv;
        system.q_block(k, xs[k], {0, 1, 2}, qv);
        system.p_block(k, xs[k], {0, 1, 2}, pv);
        for (std::size_t a = 0; a < xs[k].size(); ++a) {
            int g = offset[k] + static_cast<int>(a);
            state.q(g) = qv[0](a);
            state.q1(g) = qv[1](a);
            state.q2(g) = qv[2](a);
            state.p(g) = pv[0](a);
            state.p1(g) = pv[1](a);
            state.p2(g) = pv[2](a);
        }
    }

    state.r.resize(e, e);
    state.rx.resize(e, e);
    state.ry.resize(e, e);
    for (int i = 0; i < m; ++i) {
        if (xs[i].empty()) continue;
        for (int j = 0; j < m; ++j) {
            if (xs[j].empty()) continue;
            std::vector<Eigen::MatrixXd> blocks;
            system.resolvent_block(i, xs[i], j, xs[j], {{0, 0}, {1, 0}, {0, 1}}, blocks);
            for (std::size_t a = 0; a < xs[i].size(); ++a)
                for (std::size_t b = 0; b < xs[j].size(); ++b) {
                    int ga = offset[i] + static_cast<int>(a);
                    int gb = offset[j] + static_cast<int>(b);
                    state.r(ga, gb) = blocks[0](a, b);
                    state.rx(ga, gb) = blocks[1](a, b);
                    state.ry(ga, gb) = blocks[2](a, b);
                }
        }
    }
    return state;
}

const char* DifferentialReport::equation_name(int idx) {
    static const char* names[kEquations] = {"dr", "dr_x", "dr_y", "dq", "dp",
                                            "dq'", "dp'", "dq''", "dp''"};
    return names[idx];
}

double DifferentialReport::max_residual() const {
    return *std::max_element(residual_h.begin(), residual_h.end());
}

double DifferentialReport::max_residual_richardson() const {
    return *std::max_element(residual_richardson.begin(), residual_richardson.end());
}

namespace {

struct CenterData {
    PdeState s;
    Eigen::MatrixXd rxx, rxy, ryy;
};

CenterData center_data(const MatrixKernel& kernel, const RegionFamily& regions,
                       int nodes_per_interval) {
    CenterData c;
    c.s = assemble_state(kernel, regions, nodes_per_interval);
    const int e = c.s.size();
    c.rxx.resize(e, e);
    c.rxy.resize(e, e);
    c.ryy.resize(e, e);
    if (e == 0) return c;
    NystromSystem system(kernel, regions, nodes_per_interval);
    auto xs = slice_endpoint_xs(regions, kernel.slices());
    std::vector<int> offset(kernel.slices(), 0);
    {
        int run = 0;
        for (int k = 0; k < kernel.slices(); ++k) {
            offset[k] = run;
            run += static_cast<int>(xs[k].size());
        }
    }
    for (int i = 0; i < kernel.slices(); ++i) {
        if (xs[i].empty()) continue;
        for (int j = 0; j < kernel.slices(); ++j) {
            if (xs[j].empty()) continue;
            std::vector<Eigen::MatrixXd> blocks;
            system.resolvent_block(i, xs[i], j, xs[j], {{2, 0}, {1, 1}, {0, 2}}, blocks);
            for (std::size_t a = 0; a < xs[i].size(); ++a)
                for (std::size_t b = 0; b < xs[j].size(); ++b) {
                    int ga = offset[i] + static_cast<int>(a);
                    int gb = offset[j] + static_cast<int>(b);
                    c.rxx(ga, gb) = blocks[0](a, b);
                    c.rxy(ga, gb) = blocks[1](a, b);
                    c.ryy(ga, gb) = blocks[2](a, b);
                }
        }
    }
    return c;
}

// Residuals of the nine relations for one finite-difference derivative set.
void accumulate_residuals(const CenterData& c, int e_idx, const PdeState& dplus,
                          const PdeState& dminus, double two_h,
                          std::array<double, DifferentialReport::kEquations>& worst) {
    const PdeState& s = c.s;
    const int e = s.size();
    const double se = s.endpoints[e_idx].sign;

    auto upd = [&](int eq, double diff, double pred) {
        worst[eq] = std::max(worst[eq], std::abs(diff - pred));
    };

    for (int a = 0; a < e; ++a) {
        for (int b = 0; b < e; ++b) {
            double dr = (dplus.r(a, b) - dminus.r(a, b)) / two_h;
            double pr = -se * s.r(a, e_idx) * s.r(e_idx, b);
            if (a == e_idx) pr += s.rx(a, b);
            if (b == e_idx) pr += s.ry(a, b);
            upd(0, dr, pr);

            double drx = (dplus.rx(a, b) - dminus.rx(a, b)) / two_h;
            double prx = -se * s.rx(a, e_idx) * s.r(e_idx, b);
            if (a == e_idx) prx += c.rxx(a, b);
            if (b == e_idx) prx += c.rxy(a, b);
            upd(1, drx, prx);

            double dry = (dplus.ry(a, b) - dminus.ry(a, b)) / two_h;
            double pry = -se * s.r(a, e_idx) * s.ry(e_idx, b);
            if (a == e_idx) pry += c.rxy(a, b);
            if (b == e_idx) pry += c.ryy(a, b);
            upd(2, dry, pry);
        }

        double dq = (dplus.q(a) - dminus.q(a)) / two_h;
        double pq = -se * s.r(a, e_idx) * s.q(e_idx);
        if (a == e_idx) pq += s.q1(a);
        upd(3, dq, pq);

        double dp = (dplus.p(a) - dminus.p(a)) / two_h;
        double pp = -se * s.p(e_idx) * s.r(e_idx, a);
        if (a == e_idx) pp += s.p1(a);
        upd(4, dp, pp);

        double dq1 = (dplus.q1(a) - dminus.q1(a)) / two_h;
        double pq1 = -se * s.rx(a, e_idx) * s.q(e_idx);
        if (a == e_idx) pq1 += s.q2(a);
        upd(5, dq1, pq1);

        double dp1 = (dplus.p1(a) - dminus.p1(a)) / two_h;
        double pp1 = -se * s.p(e_idx) * s.ry(e_idx, a);
        if (a == e_idx) pp1 += s.p2(a);
        upd(6, dp1, pp1);

        double dq2 = (dplus.q2(a) - dminus.q2(a)) / two_h;
        double pq2 = -se * c.rxx(a, e_idx) * s.q(e_idx);
        if (a == e_idx) {
            double bracket = s.tau[a] * s.q1(a) - s.endpoints[a].xi * s.q(a);
            for (int cix = 0; cix < e; ++cix) {
                double sc = s.endpoints[cix].sign;
                bracket += s.r(a, cix) * sc * s.q2(cix);
                bracket -= s.ry(a, cix) * sc * s.q1(cix);
                bracket += c.ryy(a, cix) * sc * s.q(cix);
                bracket -= s.r(a, cix) * s.tau[cix] * sc * s.q(cix);
            }
            pq2 += bracket;
        }
        upd(7, dq2, pq2);

        double dp2 = (dplus.p2(a) - dminus.p2(a)) / two_h;
        double pp2 = -se * s.p(e_idx) * c.ryy(e_idx, a);
        if (a == e_idx) {
            double bracket = s.p1(a) * s.tau[a] + s.p(a) * s.endpoints[a].xi;
            for (int cix = 0; cix < e; ++cix) {
                double sc = s.endpoints[cix].sign;
                bracket += s.p2(cix) * sc * s.r(cix, a);
                bracket -= s.p1(cix) * sc * s.rx(cix, a);
                bracket += s.p(cix) * sc * c.rxx(cix, a);
                bracket -= s.p(cix) * sc * s.tau[cix] * s.r(cix, a);
            }
            pp2 += bracket;
        }
        upd(8, dp2, pp2);
    }
}

} // namespace

DifferentialReport differential_residuals(const MatrixKernel& kernel,
                                          const RegionFamily& regions, double h,
                                          int nodes_per_interval) {
    if (!(h >= 1e-6 && h <= 1e-2))
        throw std::domain_error("differential_residuals: h must lie in [1e-6, 1e-2]");
    CenterData c = center_data(kernel, regions, nodes_per_interval);
    DifferentialReport report;
    report.step = h;
    const int e = c.s.size();
    if (e == 0) return report;

    // All perturbed states, independent slots: (endpoint, sign, h-level).
    std::vector<PdeState> states(static_cast<std::size_t>(e) * 4);
    parallel_for(e * 4, [&](std::int64_t idx) {
        int e_idx = static_cast<int>(idx / 4);
        int variant = static_cast<int>(idx % 4);
        double step = (variant < 2) ? h : 0.5 * h;
        double sign = (variant % 2 == 0) ? 1.0 : -1.0;
        const auto& ep = c.s.endpoints[e_idx];
        RegionFamily shifted = shift_endpoint(regions, ep.slice, ep.w, sign * step);
        states[idx] = assemble_state(kernel, shifted, nodes_per_interval);
    });

    std::array<double, DifferentialReport::kEquations> worst_h{};
    std::array<double, DifferentialReport::kEquations> worst_rich{};
    for (int e_idx = 0; e_idx < e; ++e_idx) {
        const PdeState& ph = states[e_idx * 4 + 0];
        const PdeState& mh = states[e_idx * 4 + 1];
        accumulate_residuals(c, e_idx, ph, mh, 2.0 * h, worst_h);

        // Richardson (4 D_{h/2} - D_h)/3 as a single state difference over
        // the step h: rich = (8 v_{h/2} - v_h) / 6 on each side.
        PdeState rich_p = states[e_idx * 4 + 2];
        PdeState rich_m = states[e_idx * 4 + 3];
        auto mix_v = [](Eigen::VectorXd& v, const Eigen::VectorXd& f) {
            v = (8.0 * v - f) / 6.0;
        };
        auto mix_m = [](Eigen::MatrixXd& v, const Eigen::MatrixXd& f) {
            v = (8.0 * v - f) / 6.0;
        };
        mix_v(rich_p.q, ph.q);
        mix_v(rich_p.q1, ph.q1);
        mix_v(rich_p.q2, ph.q2);
        mix_v(rich_p.p, ph.p);
        mix_v(rich_p.p1, ph.p1);
        mix_v(rich_p.p2, ph.p2);
        mix_m(rich_p.r, ph.r);
        mix_m(rich_p.rx, ph.rx);
        mix_m(rich_p.ry, ph.ry);
        mix_v(rich_m.q, mh.q);
        mix_v(rich_m.q1, mh.q1);
        mix_v(rich_m.q2, mh.q2);
        mix_v(rich_m.p, mh.p);
        mix_v(rich_m.p1, mh.p1);
        mix_v(rich_m.p2, mh.p2);
        mix_m(rich_m.r, mh.r);
        mix_m(rich_m.rx, mh.rx);
        mix_m(rich_m.ry, mh.ry);
        accumulate_residuals(c, e_idx, rich_p, rich_m, h, worst_rich);
    }
    report.residual_h = worst_h;
    report.residual_richardson = worst_rich;
    return report;
}

double ClosureReport::max_residual() const {
    return std::max({first_order, second_order_left, second_order_right, third_order,
                     full_third_order, known_combo_diag, off_diagonal_times});
}

ClosureReport closure_identities(const MatrixKernel& kernel, const RegionFamily& regions,
                                 int nodes_per_interval) {
    const int m = kernel.slices();
    regions.validate(m);
    NystromSystem system(kernel, regions, nodes_per_interval);
    auto eps = regions.endpoints();
    const int e = static_cast<int>(eps.size());
    ClosureReport report;
    if (e == 0) return report;

    // Probe points away from the nodes, shared across slice pairs.
    const std::vector<double> probes_x = {0.1, 0.55, -0.8, 0.95, -0.4};
    const std::vector<double> probes_y = {-0.2, 0.3, 0.6, -0.75, -0.15};
    const int np = static_cast<int>(probes_x.size());

    // Derivative combinations at probes-vs-endpoint and endpoint-vs-probes.
    const std::vector<std::pair<int, int>> acombos = {{0, 0}, {1, 0}, {0, 1}, {2, 0},
                                                      {1, 1}, {3, 0}, {1, 2}, {0, 2}};
    const std::vector<std::pair<int, int>> bcombos = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}};

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<Eigen::MatrixXd> direct;
            system.resolvent_block(
                i, probes_x, j, probes_y,
                {{0, 0}, {1, 0}, {0, 1}, {3, 0}, {0, 3}, {2, 0}, {1, 1}, {0, 2}}, direct);
            const Eigen::MatrixXd& r00 = direct[0];
            const Eigen::MatrixXd& r10 = direct[1];
            const Eigen::MatrixXd& r01 = direct[2];
            const Eigen::MatrixXd& r30 = direct[3];
            const Eigen::MatrixXd& r03 = direct[4];
            const Eigen::MatrixXd& r20 = direct[5];
            const Eigen::MatrixXd& r11 = direct[6];
            const Eigen::MatrixXd& r02 = direct[7];

            std::vector<Eigen::VectorXd> qv, pv;
            system.q_block(i, probes_x, {0, 1, 2, 3}, qv);
            system.p_block(j, probes_y, {0, 1, 2, 3}, pv);

            std::vector<std::vector<Eigen::MatrixXd>> A(e), B(e);
            for (int a = 0; a < e; ++a) {
                std::vector<double> xi = {eps[a].xi};
                system.resolvent_block(i, probes_x, eps[a].slice, xi, acombos, A[a]);
                system.resolvent_block(eps[a].slice, xi, j, probes_y, bcombos, B[a]);
            }

            double ti = kernel.tau(i), tj = kernel.tau(j);
            for (int px = 0; px < np; ++px)
                for (int py = 0; py < np; ++py) {
                    double x = probes_x[px], y = probes_y[py];
                    double dsum_a = 0.0, dsum_bl = 0.0, dsum_br = 0.0, dsum_c = 0.0,
                           dsum_d = 0.0, dsum_t = 0.0;
                    for (int a = 0; a < e; ++a) {
                        double sg = eps[a].sign;
                        double Ra = A[a][0](px, 0), Rxa = A[a][1](px, 0);
                        double Rya = A[a][2](px, 0), Rxxa = A[a][3](px, 0);
                        double Rxya = A[a][4](px, 0), Rxxxa = A[a][5](px, 0);
                        double Rxyya = A[a][6](px, 0), Ryya = A[a][7](px, 0);
                        double Rb = B[a][0](0, py), Rxb = B[a][1](0, py), Ryb = B[a][2](0, py);
                        double Rxxb = B[a][3](0, py), Ryyb = B[a][4](0, py);
                        double tk = kernel.tau(eps[a].slice);
                        dsum_a += sg * Ra * Rb;
                        dsum_bl += sg * Rxa * Rb;
                        dsum_br += sg * Ra * Ryb;
                        dsum_c += sg * (Rxxa * Rb - Rxa * Ryb + Ra * Ryyb);
                        dsum_d += sg * (-Rya * Rxb + Ryya * Rb + Ra * Rxxb - tk * Ra * Rb);
                        dsum_t += sg * (Rxxxa * Rb - Rxxa * Ryb + Rxa * Ryyb + Rxya * Rxb -
                                        Rxyya * Rb - Rxa * Rxxb + tk * Rxa * Rb);
                    }

                    double qp = qv[0](px) * pv[0](py);
                    report.first_order =
                        std::max(report.first_order,
                                 std::abs(r10(px, py) + r01(px, py) + qp - dsum_a));
                    report.second_order_left = std::max(
                        report.second_order_left,
                        std::abs(r20(px, py) + r11(px, py) + qv[1](px) * pv[0](py) - dsum_bl));
                    report.second_order_right = std::max(
                        report.second_order_right,
                        std::abs(r11(px, py) + r02(px, py) + qv[0](px) * pv[1](py) - dsum_br));
                    double third = r30(px, py) + r03(px, py);
                    report.third_order = std::max(
                        report.third_order,
                        std::abs(third + qv[2](px) * pv[0](py) - qv[1](px) * pv[1](py) +
                                 qv[0](px) * pv[2](py) - dsum_c));
                    report.full_third_order = std::max(
                        report.full_third_order,
                        std::abs(third - ti * r10(px, py) - tj * r01(px, py) +
                                 (x - y) * r00(px, py) - dsum_d));
                    if (i != j) {
                        double lhs = ti * r20(px, py) + tj * r11(px, py);
                        double rhs = r00(px, py) + (x - y) * r10(px, py) -
                                     qv[3](px) * pv[0](py) + qv[2](px) * pv[1](py) -
                                     qv[1](px) * pv[2](py) + dsum_t;
                        report.off_diagonal_times =
                            std::max(report.off_diagonal_times, std::abs(lhs - rhs));
                    }
                }
        }

    // Endpoint-pair "known combination" checks against the state entries.
    PdeState s = assemble_state(kernel, regions, nodes_per_interval);
    for (int a = 0; a < e; ++a)
        for (int b = 0; b < e; ++b) {
            double rxx = system.resolvent(eps[a].slice, eps[a].xi, eps[b].slice, eps[b].xi, 2, 0);
            double rxy = system.resolvent(eps[a].slice, eps[a].xi, eps[b].slice, eps[b].xi, 1, 1);
            double ryy = system.resolvent(eps[a].slice, eps[a].xi, eps[b].slice, eps[b].xi, 0, 2);
            double left = 0.0, right = 0.0;
            for (int cix = 0; cix < e; ++cix) {
                double sc = eps[cix].sign;
                left += sc * s.rx(a, cix) * s.r(cix, b);
                right += sc * s.r(a, cix) * s.ry(cix, b);
            }
            double resid_l = std::abs(rxx + rxy + s.q1(a) * s.p(b) - left);
            double resid_r = std::abs(rxy + ryy + s.q(a) * s.p1(b) - right);
            report.known_combo_diag = std::max({report.known_combo_diag, resid_l, resid_r});
        }
    return report;
}

} // namespace pearcey

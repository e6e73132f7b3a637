#include "pearcey/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pearcey/errors.hpp"

namespace pearcey {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Domain headroom used when sizing contour truncation: entries are evaluated
// for |x|, |y| up to this scale without rebuilding rules.
constexpr double kArgHeadroom = 6.0;

} // namespace

void TauGrid::validate() const {
    for (std::size_t k = 1; k < taus.size(); ++k)
        if (!(taus[k - 1] < taus[k]))
            throw std::domain_error("TauGrid: times must be strictly increasing");
}

void KernelSpec::validate() const {
    tau_grid.validate();
    if (tau_grid.size() < 1) throw std::domain_error("KernelSpec: need at least one time");
    if (order_R < 1) throw std::domain_error("KernelSpec: order_R must be >= 1");
    if (form == KernelForm::CanonicalQuartic && order_R != 1)
        throw std::domain_error("KernelSpec: the canonical quartic form requires order_R = 1");
}

void MatrixKernel::eval_block(int i, int j, const std::vector<double>& xs,
                              const std::vector<double>& ys,
                              const std::vector<std::pair<int, int>>& combos,
                              std::vector<Eigen::MatrixXd>& out) const {
    out.assign(combos.size(), Eigen::MatrixXd(xs.size(), ys.size()));
    for (std::size_t c = 0; c < combos.size(); ++c)
        for (std::size_t p = 0; p < xs.size(); ++p)
            for (std::size_t q = 0; q < ys.size(); ++q)
                out[c](p, q) = entry(i, j, xs[p], ys[q], combos[c].first, combos[c].second);
}

double MatrixKernel::phi_component(int, double, int) const {
    throw std::logic_error("this kernel has no phi/psi pair");
}

double MatrixKernel::psi_component(int, double, int) const {
    throw std::logic_error("this kernel has no phi/psi pair");
}

double gaussian_kernel_deriv(double u, double variance, int order) {
    if (variance <= 0.0) throw std::domain_error("gaussian_kernel_deriv: variance must be > 0");
    double rv = std::sqrt(variance);
    double z = u / rv;
    // (d/du)^k g = (-1)^k v^{-k/2} He_k(u/sqrt(v)) g, probabilists' Hermite.
    double he0 = 1.0, he1 = z;
    double he = (order == 0) ? he0 : he1;
    for (int k = 2; k <= order; ++k) {
        double next = z * he1 - (k - 1) * he0;
        he0 = he1;
        he1 = next;
        he = next;
    }
    double g = std::exp(-0.5 * z * z) / (rv * std::sqrt(2.0 * M_PI));
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(rv, -order) * he * g;
}

ExtendedPearceyKernel::ExtendedPearceyKernel(KernelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    int R = spec_.order_R;
    ContourPath tpath;
    if (spec_.form == KernelForm::CanonicalQuartic) {
        lead_t_ = 0.25;
        quad_scale_ = 0.5;
        lin_scale_ = 1.0;
        prefactor_ = -1.0 / (4.0 * M_PI * M_PI);
        tpath = pearcey_t_contour(0.0);
    } else {
        double sign = (R % 2 == 0) ? -1.0 : 1.0;
        lead_t_ = sign / factorial(R + 1);
        quad_scale_ = 4.0;
        lin_scale_ = 4.0;
        prefactor_ = -1.0 / (M_PI * M_PI);
        tpath = higher_order_t_contour(R);
    }
    lead_s_ = -lead_t_;

    double max_tau = 0.0;
    for (double t : spec_.tau_grid.taus) max_tau = std::max(max_tau, std::abs(t));
    double radius = spec_.quad.radius;
    if (radius <= 0.0) {
        radius = 2.0;
        int power = 2 * R + 2;
        for (int iter = 0; iter < 200; ++iter) {
            double budget = std::abs(lead_t_) * std::pow(radius, power)
                            - quad_scale_ * max_tau * radius * radius
                            - lin_scale_ * kArgHeadroom * radius - 60.0;
            if (budget > 0.0) break;
            radius *= 1.1;
        }
        if (spec_.form == KernelForm::CanonicalQuartic) radius = std::max(radius, 8.0);
    }

    trule_ = build_rule(tpath, radius, spec_.quad.panels, spec_.quad.nodes_per_panel,
                        spec_.quad.grading);
    srule_ = build_rule(imaginary_axis_contour(), radius, spec_.quad.panels,
                        spec_.quad.nodes_per_panel, spec_.quad.grading);

    const auto nt = static_cast<Eigen::Index>(trule_.size());
    const auto ns = static_cast<Eigen::Index>(srule_.size());
    inv_smt_.resize(nt, ns);
    for (Eigen::Index a = 0; a < nt; ++a)
        for (Eigen::Index b = 0; b < ns; ++b)
            inv_smt_(a, b) = 1.0 / (srule_.nodes[b] - trule_.nodes[a]);

    // Defect of the working rule pair on the universal 1/(s-t) integrand,
    // relative to a 40-panel reference at the same truncation radius.
    {
        Complex work = 0.0;
        for (Eigen::Index a = 0; a < nt; ++a) {
            Complex inner = 0.0;
            for (Eigen::Index b = 0; b < ns; ++b) inner += srule_.weights[b] * inv_smt_(a, b);
            work += trule_.weights[a] * inner;
        }
        QuadratureRule tdeep = build_rule(tpath, radius, 40, spec_.quad.nodes_per_panel,
                                          spec_.quad.grading);
        QuadratureRule sdeep = build_rule(imaginary_axis_contour(), radius, 40,
                                          spec_.quad.nodes_per_panel, spec_.quad.grading);
        Complex deep = 0.0;
        for (std::size_t a = 0; a < tdeep.size(); ++a) {
            Complex inner = 0.0;
            for (std::size_t b = 0; b < sdeep.size(); ++b)
                inner += sdeep.weights[b] / (sdeep.nodes[b] - tdeep.nodes[a]);
            deep += tdeep.weights[a] * inner;
        }
        origin_defect_ = deep - work;
    }

    int m = slices();
    tbase_.resize(m);
    sbase_.resize(m);
    for (int k = 0; k < m; ++k) {
        double tk = spec_.tau_grid[k];
        tbase_[k].resize(nt);
        for (Eigen::Index a = 0; a < nt; ++a) {
            Complex t = trule_.nodes[a];
            Complex t2 = t * t;
            Complex tp = t2;
            for (int pw = 4; pw <= 2 * R + 2; pw += 2) tp *= t2;
            tbase_[k](a) = trule_.weights[a] * std::exp(lead_t_ * tp - quad_scale_ * tk * t2);
        }
        sbase_[k].resize(ns);
        for (Eigen::Index b = 0; b < ns; ++b) {
            Complex s = srule_.nodes[b];
            Complex s2 = s * s;
            Complex sp = s2;
            for (int pw = 4; pw <= 2 * R + 2; pw += 2) sp *= s2;
            sbase_[k](b) = srule_.weights[b] * std::exp(lead_s_ * sp + quad_scale_ * tk * s2);
        }
    }
}

PearceyParams ExtendedPearceyKernel::params_for(int slice) const {
    PearceyParams p;
    p.tau = spec_.tau_grid[slice];
    p.order_R = spec_.order_R;
    p.higher_order_form = (spec_.form == KernelForm::HigherOrder);
    return p;
}

double ExtendedPearceyKernel::phi_component(int i, double x, int deriv) const {
    return detail::phi_raw(x, params_for(i), deriv);
}

double ExtendedPearceyKernel::psi_component(int j, double y, int deriv) const {
    return detail::psi_raw(y, params_for(j), deriv);
}

double ExtendedPearceyKernel::commutator_coefficient() const { return lin_scale_; }

Eigen::MatrixXcd ExtendedPearceyKernel::amatrix(int i, const std::vector<double>& xs, int dx) const {
    const auto nt = static_cast<Eigen::Index>(trule_.size());
    Eigen::MatrixXcd a(nt, static_cast<Eigen::Index>(xs.size()));
    for (Eigen::Index col = 0; col < a.cols(); ++col) {
        double x = xs[col];
        for (Eigen::Index row = 0; row < nt; ++row) {
            Complex t = trule_.nodes[row];
            Complex v = tbase_[i](row) * std::exp((lin_scale_ * x) * t);
            for (int k = 0; k < dx; ++k) v *= lin_scale_ * t;
            a(row, col) = v;
        }
    }
    return a;
}

Eigen::MatrixXcd ExtendedPearceyKernel::bmatrix(int j, const std::vector<double>& ys, int dy) const {
    const auto ns = static_cast<Eigen::Index>(srule_.size());
    Eigen::MatrixXcd b(ns, static_cast<Eigen::Index>(ys.size()));
    for (Eigen::Index col = 0; col < b.cols(); ++col) {
        double y = ys[col];
        for (Eigen::Index row = 0; row < ns; ++row) {
            Complex s = srule_.nodes[row];
            Complex v = sbase_[j](row) * std::exp((-lin_scale_ * y) * s);
            for (int k = 0; k < dy; ++k) v *= -lin_scale_ * s;
            b(row, col) = v;
        }
    }
    return b;
}

double ExtendedPearceyKernel::h(int i, int j, double x, double y, int dx, int dy) const {
    std::vector<Eigen::MatrixXd> out;
    eval_block_h(i, j, {x}, {y}, {{dx, dy}}, out);
    return out[0](0, 0);
}

double ExtendedPearceyKernel::e(int i, int j, double x, double y, int dx, int dy) const {
    if (i >= j) return 0.0;
    double dtau = spec_.tau_grid[j] - spec_.tau_grid[i];
    double variance = (spec_.form == KernelForm::CanonicalQuartic) ? dtau : 0.5 * dtau;
    double sign = (dy % 2 == 0) ? 1.0 : -1.0;
    return sign * gaussian_kernel_deriv(x - y, variance, dx + dy);
}

double ExtendedPearceyKernel::entry(int i, int j, double x, double y, int dx, int dy) const {
    return h(i, j, x, y, dx, dy) - e(i, j, x, y, dx, dy);
}

void ExtendedPearceyKernel::eval_block_h(int i, int j, const std::vector<double>& xs,
                                         const std::vector<double>& ys,
                                         const std::vector<std::pair<int, int>>& combos,
                                         std::vector<Eigen::MatrixXd>& out) const {
    if (i < 0 || i >= slices() || j < 0 || j >= slices())
        throw std::domain_error("ExtendedPearceyKernel: slice index out of range");
    out.assign(combos.size(), Eigen::MatrixXd());

    // One inv_smt * B product per distinct dy; dx variations reuse it.
    std::vector<int> dys;
    for (auto& c : combos)
        if (std::find(dys.begin(), dys.end(), c.second) == dys.end()) dys.push_back(c.second);

    std::vector<Eigen::MatrixXcd> cb(dys.size());
    for (std::size_t k = 0; k < dys.size(); ++k)
        cb[k] = inv_smt_ * bmatrix(j, ys, dys[k]);

    std::vector<int> dxs;
    for (auto& c : combos)
        if (std::find(dxs.begin(), dxs.end(), c.first) == dxs.end()) dxs.push_back(c.first);
    std::vector<Eigen::MatrixXcd> amats(dxs.size());
    for (std::size_t k = 0; k < dxs.size(); ++k) amats[k] = amatrix(i, xs, dxs[k]);

    for (std::size_t c = 0; c < combos.size(); ++c) {
        auto ia = std::find(dxs.begin(), dxs.end(), combos[c].first) - dxs.begin();
        auto ib = std::find(dys.begin(), dys.end(), combos[c].second) - dys.begin();
        Eigen::MatrixXcd v = prefactor_ * (amats[ia].transpose() * cb[ib]);
        if (combos[c].first == 0 && combos[c].second == 0)
            v.array() += prefactor_ * origin_defect_;
        double max_im = v.imag().cwiseAbs().maxCoeff();
        double scale = std::max(1.0, v.real().cwiseAbs().maxCoeff());
        if (max_im > 1e-11 * scale)
            throw numeric_error("kernel quadrature left an imaginary residue", max_im);
        out[c] = v.real();
    }
}

void ExtendedPearceyKernel::eval_block(int i, int j, const std::vector<double>& xs,
                                       const std::vector<double>& ys,
                                       const std::vector<std::pair<int, int>>& combos,
                                       std::vector<Eigen::MatrixXd>& out) const {
    eval_block_h(i, j, xs, ys, combos, out);
    if (i >= j) return;
    for (std::size_t c = 0; c < combos.size(); ++c)
        for (std::size_t p = 0; p < xs.size(); ++p)
            for (std::size_t q = 0; q < ys.size(); ++q)
                out[c](p, q) -= e(i, j, xs[p], ys[q], combos[c].first, combos[c].second);
}

void TransposedKernel::eval_block(int i, int j, const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  const std::vector<std::pair<int, int>>& combos,
                                  std::vector<Eigen::MatrixXd>& out) const {
    std::vector<std::pair<int, int>> swapped;
    swapped.reserve(combos.size());
    for (auto& c : combos) swapped.emplace_back(c.second, c.first);
    std::vector<Eigen::MatrixXd> tmp;
    base_.eval_block(j, i, ys, xs, swapped, tmp);
    out.resize(tmp.size());
    for (std::size_t c = 0; c < tmp.size(); ++c) out[c] = tmp[c].transpose();
}

double integrable_entry(double x, double y, double tau) {
    PearceyParams p(tau);
    if (std::abs(x - y) < 1e-4) {
        // The numerator N vanishes on the diagonal; expanding it about the
        // midpoint gives K = N_x - N_xy (x-y)/2 + O((x-y)^2). The N_xy term
        // keeps the branch consistent with direct evaluation at |x-y| ~ 1e-3.
        double c = 0.5 * (x + y);
        double nx = detail::phi_raw(c, p, 3) * detail::psi_raw(c, p, 0)
                  - detail::phi_raw(c, p, 2) * detail::psi_raw(c, p, 1)
                  + detail::phi_raw(c, p, 1) * detail::psi_raw(c, p, 2)
                  - tau * detail::phi_raw(c, p, 1) * detail::psi_raw(c, p, 0);
        double nxy = detail::phi_raw(c, p, 3) * detail::psi_raw(c, p, 1)
                   - detail::phi_raw(c, p, 2) * detail::psi_raw(c, p, 2)
                   + detail::phi_raw(c, p, 1) * detail::psi_raw(c, p, 3)
                   - tau * detail::phi_raw(c, p, 1) * detail::psi_raw(c, p, 1);
        return nx - 0.5 * nxy * (x - y);
    }
    double num = detail::phi_raw(x, p, 2) * detail::psi_raw(y, p, 0)
               - detail::phi_raw(x, p, 1) * detail::psi_raw(y, p, 1)
               + detail::phi_raw(x, p, 0) * detail::psi_raw(y, p, 2)
               - tau * detail::phi_raw(x, p, 0) * detail::psi_raw(y, p, 0);
    return num / (x - y);
}

} // namespace pearcey

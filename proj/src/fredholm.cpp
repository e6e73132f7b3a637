#include "pearcey/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pearcey/errors.hpp"
#include "pearcey/gauss.hpp"

namespace pearcey {

void RegionFamily::validate(int expected_slices) const {
    if (static_cast<int>(slices.size()) != expected_slices)
        throw std::domain_error("RegionFamily: one interval list per time slice required");
    for (const auto& list : slices) {
        for (std::size_t w = 0; w < list.size(); ++w) {
            if (!(list[w].lo < list[w].hi))
                throw std::domain_error("RegionFamily: interval endpoints must increase");
            if (w > 0 && !(list[w].lo >= list[w - 1].hi))
                throw std::domain_error("RegionFamily: intervals must not overlap");
        }
    }
}

bool RegionFamily::empty() const {
    for (const auto& list : slices)
        if (!list.empty()) return false;
    return true;
}

std::vector<RegionFamily::Endpoint> RegionFamily::endpoints() const {
    std::vector<Endpoint> out;
    for (int k = 0; k < static_cast<int>(slices.size()); ++k) {
        int w = 1;
        for (const Interval& iv : slices[k]) {
            out.push_back({k, w, iv.lo, 1});
            out.push_back({k, w + 1, iv.hi, -1});
            w += 2;
        }
    }
    return out;
}

int RegionFamily::interval_count() const {
    int c = 0;
    for (const auto& list : slices) c += static_cast<int>(list.size());
    return c;
}

NystromSystem::NystromSystem(const MatrixKernel& kernel, RegionFamily regions,
                             int nodes_per_interval)
    : kernel_(&kernel), regions_(std::move(regions)), nodes_per_interval_(nodes_per_interval) {
    if (nodes_per_interval_ < 4)
        throw std::domain_error("NystromSystem: nodes_per_interval must be >= 4");
    int m = kernel_->slices();
    regions_.validate(m);

    const GaussRule& g = gauss_legendre(nodes_per_interval_);
    for (int k = 0; k < m; ++k) {
        int begin = static_cast<int>(nodes_.size());
        for (const Interval& iv : regions_.slices[k]) {
            double half = 0.5 * (iv.hi - iv.lo), mid = 0.5 * (iv.hi + iv.lo);
            for (int q = 0; q < nodes_per_interval_; ++q) {
                nodes_.push_back(mid + half * g.nodes[q]);
                weights_.push_back(half * g.weights[q]);
                node_slice_.push_back(k);
            }
        }
        slice_ranges_.emplace_back(begin, static_cast<int>(nodes_.size()));
    }

    const int n = size();
    M_.resize(n, n);
    has_qp_ = kernel_->has_phi_psi();
    if (n == 0) {
        det_ = 1.0;
        q_node_.resize(0);
        p_node_.resize(0);
        return;
    }
    for (int k = 0; k < m; ++k) {
        auto [kb, ke] = slice_ranges_[k];
        if (ke == kb) continue;
        std::vector<double> xs(nodes_.begin() + kb, nodes_.begin() + ke);
        for (int l = 0; l < m; ++l) {
            auto [lb, le] = slice_ranges_[l];
            if (le == lb) continue;
            std::vector<double> ys(nodes_.begin() + lb, nodes_.begin() + le);
            std::vector<Eigen::MatrixXd> block;
            kernel_->eval_block(k, l, xs, ys, {{0, 0}}, block);
            for (int a = 0; a < ke - kb; ++a)
                for (int b = 0; b < le - lb; ++b)
                    M_(kb + a, lb + b) = block[0](a, b) * weights_[lb + b];
        }
    }

    Eigen::MatrixXd imk = Eigen::MatrixXd::Identity(n, n) - M_;
    lu_.compute(imk);
    lut_.compute(imk.transpose());
    det_ = lu_.determinant();
    if (!std::isfinite(det_) || std::abs(det_) < 1e-300)
        throw numeric_error("NystromSystem: I - K chi is numerically singular", det_);

    // Node-node resolvent: (I-M)^{-1} K_node, where K_node = M W^{-1}.
    Eigen::MatrixXd k_node = M_;
    for (int b = 0; b < n; ++b) k_node.col(b) /= weights_[b];
    r_node_ = lu_.solve(k_node);

    if (has_qp_) {
        Eigen::VectorXd phi_nodes(n), psi_nodes(n);
        for (int a = 0; a < n; ++a) {
            phi_nodes(a) = kernel_->phi_component(node_slice_[a], nodes_[a]);
            psi_nodes(a) = kernel_->psi_component(node_slice_[a], nodes_[a]);
        }
        q_node_ = lu_.solve(phi_nodes);
        // P on nodes solves (I-M)^T (W p) = W psi.
        Eigen::VectorXd wpsi = psi_nodes;
        for (int a = 0; a < n; ++a) wpsi(a) *= weights_[a];
        Eigen::VectorXd wp = lut_.solve(wpsi);
        p_node_ = wp;
        for (int a = 0; a < n; ++a) p_node_(a) /= weights_[a];
    }
}

const Eigen::VectorXd& NystromSystem::q_node_vector() const {
    if (!has_qp_) throw std::logic_error("NystromSystem: kernel has no phi/psi pair");
    return q_node_;
}

const Eigen::VectorXd& NystromSystem::p_node_vector() const {
    if (!has_qp_) throw std::logic_error("NystromSystem: kernel has no phi/psi pair");
    return p_node_;
}

void NystromSystem::kernel_rows(int i, const std::vector<double>& xs,
                                const std::vector<int>& dxs,
                                std::vector<Eigen::MatrixXd>& out) const {
    const int n = size();
    out.assign(dxs.size(), Eigen::MatrixXd::Zero(xs.size(), n));
    std::vector<std::pair<int, int>> combos;
    for (int dx : dxs) combos.emplace_back(dx, 0);
    for (std::size_t l = 0; l < slice_ranges_.size(); ++l) {
        auto [lb, le] = slice_ranges_[l];
        if (le == lb) continue;
        std::vector<double> ys(nodes_.begin() + lb, nodes_.begin() + le);
        std::vector<Eigen::MatrixXd> block;
        kernel_->eval_block(i, static_cast<int>(l), xs, ys, combos, block);
        for (std::size_t c = 0; c < dxs.size(); ++c)
            out[c].middleCols(lb, le - lb) = block[c];
    }
}

void NystromSystem::kernel_cols(int j, const std::vector<double>& ys,
                                const std::vector<int>& dys,
                                std::vector<Eigen::MatrixXd>& out) const {
    const int n = size();
    out.assign(dys.size(), Eigen::MatrixXd::Zero(n, ys.size()));
    std::vector<std::pair<int, int>> combos;
    for (int dy : dys) combos.emplace_back(0, dy);
    for (std::size_t l = 0; l < slice_ranges_.size(); ++l) {
        auto [lb, le] = slice_ranges_[l];
        if (le == lb) continue;
        std::vector<double> xs(nodes_.begin() + lb, nodes_.begin() + le);
        std::vector<Eigen::MatrixXd> block;
        kernel_->eval_block(static_cast<int>(l), j, xs, ys, combos, block);
        for (std::size_t c = 0; c < dys.size(); ++c)
            out[c].middleRows(lb, le - lb) = block[c];
    }
}

void NystromSystem::resolvent_block(int i, const std::vector<double>& xs, int j,
                                    const std::vector<double>& ys,
                                    const std::vector<std::pair<int, int>>& combos,
                                    std::vector<Eigen::MatrixXd>& out) const {
    std::vector<int> dxs, dys;
    for (auto& c : combos) {
        if (std::find(dxs.begin(), dxs.end(), c.first) == dxs.end()) dxs.push_back(c.first);
        if (std::find(dys.begin(), dys.end(), c.second) == dys.end()) dys.push_back(c.second);
    }
    std::vector<Eigen::MatrixXd> kxy;
    kernel_->eval_block(i, j, xs, ys, combos, kxy);
    if (size() == 0) {
        out = std::move(kxy);
        return;
    }
    std::vector<Eigen::MatrixXd> kxn, kny;
    kernel_rows(i, xs, dxs, kxn);
    kernel_cols(j, ys, dys, kny);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights_.data(), size());

    // d_x^dx R(x, nodes) = K^{(dx,0)}(x, nodes) (I + W R_node).
    std::vector<Eigen::MatrixXd> rxn(dxs.size());
    for (std::size_t c = 0; c < dxs.size(); ++c)
        rxn[c] = kxn[c] + (kxn[c] * w.asDiagonal()) * r_node_;

    out.resize(combos.size());
    for (std::size_t c = 0; c < combos.size(); ++c) {
        auto ia = std::find(dxs.begin(), dxs.end(), combos[c].first) - dxs.begin();
        auto ib = std::find(dys.begin(), dys.end(), combos[c].second) - dys.begin();
        out[c] = kxy[c] + rxn[ia] * w.asDiagonal() * kny[ib];
    }
}

double NystromSystem::resolvent(int i, double x, int j, double y, int dx, int dy) const {
    std::vector<Eigen::MatrixXd> out;
    resolvent_block(i, {x}, j, {y}, {{dx, dy}}, out);
    return out[0](0, 0);
}

void NystromSystem::q_block(int i, const std::vector<double>& xs, const std::vector<int>& derivs,
                            std::vector<Eigen::VectorXd>& out) const {
    if (!has_qp_) throw std::logic_error("NystromSystem: kernel has no phi/psi pair");
    out.assign(derivs.size(), Eigen::VectorXd(xs.size()));
    std::vector<Eigen::MatrixXd> kxn;
    if (size() > 0) kernel_rows(i, xs, derivs, kxn);
    Eigen::VectorXd wq;
    if (size() > 0) {
        wq = q_node_;
        for (int a = 0; a < size(); ++a) wq(a) *= weights_[a];
    }
    for (std::size_t c = 0; c < derivs.size(); ++c) {
        for (std::size_t p = 0; p < xs.size(); ++p) {
            double v = kernel_->phi_component(i, xs[p], derivs[c]);
            if (size() > 0) v += kxn[c].row(p).dot(wq);
            out[c](p) = v;
        }
    }
}

void NystromSystem::p_block(int j, const std::vector<double>& ys, const std::vector<int>& derivs,
                            std::vector<Eigen::VectorXd>& out) const {
    if (!has_qp_) throw std::logic_error("NystromSystem: kernel has no phi/psi pair");
    out.assign(derivs.size(), Eigen::VectorXd(ys.size()));
    std::vector<Eigen::MatrixXd> kny;
    if (size() > 0) kernel_cols(j, ys, derivs, kny);
    Eigen::VectorXd wp;
    if (size() > 0) {
        wp = p_node_;
        for (int a = 0; a < size(); ++a) wp(a) *= weights_[a];
    }
    for (std::size_t c = 0; c < derivs.size(); ++c) {
        for (std::size_t p = 0; p < ys.size(); ++p) {
            double v = kernel_->psi_component(j, ys[p], derivs[c]);
            if (size() > 0) v += kny[c].col(p).dot(wp);
            out[c](p) = v;
        }
    }
}

std::pair<double, double> NystromSystem::qp(int i, double x, int deriv) const {
    std::vector<Eigen::VectorXd> q, p;
    q_block(i, {x}, {deriv}, q);
    p_block(i, {x}, {deriv}, p);
    return {q[0](0), p[0](0)};
}

double gap_probability(const NystromSystem& system) {
    double det = system.determinant();
    if (det < -1e-8 || det > 1.0 + 1e-8)
        throw numeric_error("gap probability outside [0,1] tolerance band", det);
    return det;
}

double correlation_density(const MatrixKernel& kernel,
                           const std::vector<std::pair<int, double>>& points) {
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd mat(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            mat(a, b) = kernel.entry(points[a].first, points[b].first, points[a].second,
                                     points[b].second);
    return mat.determinant();
}

} // namespace pearcey

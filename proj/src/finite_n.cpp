#include "pearcey/finite_n.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pearcey/errors.hpp"
#include "pearcey/gauss.hpp"

namespace pearcey {

void PathModel::validate() const {
    if (n < 1) throw std::domain_error("PathModel: n must be >= 1");
    if (static_cast<int>(starts.size()) != n || static_cast<int>(ends.size()) != n)
        throw std::domain_error("PathModel: starts/ends must have n entries");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ends[i] - ends[j]) < 1e-12)
                throw std::domain_error("PathModel: end points must be pairwise distinct");
    if (times.empty()) throw std::domain_error("PathModel: need at least one time");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] > 0.0 && times[k] < 1.0))
            throw std::domain_error("PathModel: times must lie in (0,1)");
        if (k > 0 && !(times[k - 1] < times[k]))
            throw std::domain_error("PathModel: times must be strictly increasing");
    }
    if (normalization <= 0.0) throw std::domain_error("PathModel: normalization must be > 0");
}

bool PathModel::zero_start() const {
    for (double a : starts)
        if (a != 0.0) return false;
    return true;
}

double PathModel::sigma(int k) const {
    int m = slices();
    double lo = (k == 0) ? 0.0 : times[k - 1];
    double hi = (k == m) ? 1.0 : times[k];
    return hi - lo;
}

double heat_p(double x, double y, double sigma) {
    if (sigma <= 0.0) throw std::domain_error("heat_p: sigma must be > 0");
    double d = x - y;
    return std::exp(-d * d / sigma) / std::sqrt(M_PI * sigma);
}

double heat_p_da(double y, double sigma, int j) {
    // P(a,y,sigma) = (pi sigma)^{-1/2} exp(alpha a^2 + beta a + gamma) with
    // alpha = -1/sigma, beta = 2y/sigma; F_{j+1} = beta F_j + 2 alpha j F_{j-1}.
    double alpha = -1.0 / sigma, beta = 2.0 * y / sigma;
    double f0 = heat_p(0.0, y, sigma);
    if (j == 0) return f0;
    double fm = f0, fc = beta * f0;
    for (int k = 1; k < j; ++k) {
        double fn = beta * fc + 2.0 * alpha * k * fm;
        fm = fc;
        fc = fn;
    }
    return fc;
}

namespace {

// Derivatives of g(a) = e^{a^2} P(y,a,sigma) at a = 0, same recursion with
// alpha = 1 - 1/sigma.
void ea2_heat_derivs(double y, double sigma, int count, std::vector<double>& out) {
    double alpha = 1.0 - 1.0 / sigma, beta = 2.0 * y / sigma;
    out.resize(count);
    out[0] = heat_p(y, 0.0, sigma);
    if (count == 1) return;
    out[1] = beta * out[0];
    for (int k = 1; k + 1 < count; ++k) out[k + 1] = beta * out[k] + 2.0 * alpha * k * out[k - 1];
}

template <class F>
double integrate_panels(F&& f, double a, double b, int panels, int nodes) {
    const GaussRule& g = gauss_legendre(nodes);
    double total = 0.0;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * w;
        for (int i = 0; i < nodes; ++i)
            total += 0.5 * w * g.weights[i] * f(lo + 0.5 * w * (1.0 + g.nodes[i]));
    }
    return total;
}

double h_zero_sum(const PathModel& model, int k, int l, double x, double y) {
    int n = model.n;
    if (n > 12)
        throw numeric_error("zero-start sum form is ill-conditioned beyond n = 12", n);
    double tk = model.times[k], tl = model.times[l];
    std::vector<double> g;
    ea2_heat_derivs(y, tl, n, g);
    // Lagrange coefficients from the monic product polynomial by synthetic
    // division; the denominator is its derivative at b_i.
    std::vector<double> poly(n + 1, 0.0);
    poly[0] = 1.0;  // leading coefficient first
    for (int r = 0; r < n; ++r)
        for (int d = r + 1; d > 0; --d) poly[d] = poly[d] - model.ends[r] * poly[d - 1];
    double total = 0.0;
    std::vector<double> q(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double bi = model.ends[i];
        q[0] = poly[0];
        for (int d = 1; d < n; ++d) q[d] = poly[d] + bi * q[d - 1];
        double denom = 1.0;
        for (int r = 0; r < n; ++r)
            if (r != i) denom *= bi - model.ends[r];
        // q[d] multiplies s^{n-1-d}; pair power j with 2^{-j} g_j.
        double s_i = 0.0;
        for (int d = 0; d < n; ++d) {
            int j = n - 1 - d;
            s_i += q[d] / denom * std::ldexp(1.0, -j) * g[j];
        }
        total += heat_p(x, bi, 1.0 - tk) * std::exp(bi * bi) * s_i;
    }
    return model.normalization * total;
}

double h_zero_contour(const PathModel& model, int k, int l, double x, double y) {
    int n = model.n;
    double tk = model.times[k], tl = model.times[l];
    std::vector<double> bs = model.ends;
    std::sort(bs.begin(), bs.end());

    // The s-line must avoid the circles but can sit anywhere, so pick the
    // admissible vertical line closest to 0: |e^{A s^2}| on the line grows
    // like e^{A v0^2} and would otherwise drown the result in cancellation.
    const double min_gap = 1.2;
    double v0 = bs.front() - min_gap;
    auto consider = [&](double cand) {
        if (std::abs(cand) < std::abs(v0)) v0 = cand;
    };
    consider(bs.back() + min_gap);
    for (int q = 0; q + 1 < n; ++q)
        if (bs[q + 1] - bs[q] >= min_gap) consider(0.5 * (bs[q] + bs[q + 1]));
    if (v0 > bs.front() - min_gap && v0 < bs.back() + min_gap) {
        bool clear = true;
        for (double b : bs)
            if (std::abs(b - v0) < 0.5 * min_gap) clear = false;
        if (!clear) v0 = (std::abs(bs.front() - min_gap) < std::abs(bs.back() + min_gap))
                            ? bs.front() - min_gap
                            : bs.back() + min_gap;
    }

    // One counterclockwise circle per side of the line; jointly they enclose
    // every end point while staying away from the s contour.
    QuadratureRule tq;
    for (int side = 0; side < 2; ++side) {
        double gmin = 0.0, gmax = 0.0;
        bool any = false;
        for (double b : bs) {
            if ((side == 0 && b < v0) || (side == 1 && b > v0)) {
                if (!any) {
                    gmin = gmax = b;
                    any = true;
                } else {
                    gmin = std::min(gmin, b);
                    gmax = std::max(gmax, b);
                }
            }
        }
        if (!any) continue;
        double clearance = std::min(std::abs(gmin - v0), std::abs(gmax - v0));
        double radius = 0.5 * (gmax - gmin) + 0.4 * clearance;
        QuadratureRule circ = circle_rule(Complex(0.5 * (gmin + gmax), 0.0), radius, 384);
        tq.nodes.insert(tq.nodes.end(), circ.nodes.begin(), circ.nodes.end());
        tq.weights.insert(tq.weights.end(), circ.weights.begin(), circ.weights.end());
    }

    double A = tl / (1.0 - tl);
    double U = 3.0;
    for (int iter = 0; iter < 300; ++iter) {
        double budget = A * (U * U - v0 * v0) - n * std::log1p(U + std::abs(v0)) - 60.0;
        if (budget > 0.0) break;
        U *= 1.12;
    }

    // Vertical line through v0, split at the real axis so the node set is
    // symmetric under conjugation (keeps the result real).
    ContourPath sline;
    sline.segments.push_back(Segment{Complex(v0, 0.0), Complex(0.0, -1.0), U, true});
    sline.segments.push_back(Segment{Complex(v0, 0.0), Complex(0.0, 1.0), U, false});
    QuadratureRule sq = build_rule_hybrid(sline, U, 2, 0.5, 0.5, 16);

    double ck = tk / (1.0 - tk), cxk = 2.0 * x / (1.0 - tk);
    double cyl = 2.0 * y / (1.0 - tl);
    std::vector<Complex> fs(tq.size()), gs(sq.size());
    for (std::size_t a = 0; a < tq.size(); ++a) {
        Complex t = tq.nodes[a];
        Complex prod = 1.0;
        for (double b : model.ends) prod *= t - b;
        fs[a] = tq.weights[a] * std::exp(-ck * t * t + cxk * t) / prod;
    }
    for (std::size_t b = 0; b < sq.size(); ++b) {
        Complex s = sq.nodes[b];
        Complex prod = 1.0;
        for (double br : model.ends) prod *= s - br;
        gs[b] = sq.weights[b] * std::exp(A * s * s - cyl * s) * prod;
    }
    Complex sum = 0.0;
    for (std::size_t a = 0; a < tq.size(); ++a) {
        Complex inner = 0.0;
        for (std::size_t b = 0; b < sq.size(); ++b) inner += gs[b] / (sq.nodes[b] - tq.nodes[a]);
        sum += fs[a] * inner;
    }
    double c0 = -(model.normalization / std::sqrt(M_PI)) /
                (2.0 * M_PI * M_PI * std::sqrt((1.0 - tk) * (1.0 - tl)));
    Complex value = c0 * std::exp(y * y / (1.0 - tl) - x * x / (1.0 - tk)) * sum;
    double scale = std::max(1.0, std::abs(value.real()));
    if (std::abs(value.imag()) > 1e-10 * scale)
        throw numeric_error("finite-n contour evaluation left an imaginary residue",
                            std::abs(value.imag()));
    return value.real();
}

} // namespace

double h_general_a(const PathModel& model, int k, int l, double x, double y) {
    model.validate();
    int n = model.n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(model.starts[i] - model.starts[j]) < 1e-12)
                throw degeneracy_error("coincident starts make B singular; use h_zero_start");
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            B(i, j) = std::exp(2.0 * model.starts[i] * model.ends[j]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXd v(n);
    double tl = model.times[l];
    for (int j = 0; j < n; ++j)
        v(j) = std::exp(model.starts[j] * model.starts[j]) * heat_p(y, model.starts[j], tl);
    Eigen::VectorXd w = lu.solve(v);
    double tk = model.times[k];
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        total += heat_p(x, model.ends[i], 1.0 - tk) * std::exp(model.ends[i] * model.ends[i]) * w(i);
    return model.normalization * total;
}

double h_zero_start(const PathModel& model, int k, int l, double x, double y,
                    ZeroStartMethod method) {
    model.validate();
    if (!model.zero_start())
        throw std::domain_error("h_zero_start: model has nonzero start points");
    return method == ZeroStartMethod::Sum ? h_zero_sum(model, k, l, x, y)
                                          : h_zero_contour(model, k, l, x, y);
}

double finite_n_e(const PathModel& model, int k, int l, double x, double y) {
    if (k >= l) return 0.0;
    return heat_p(x, y, model.times[l] - model.times[k]);
}

double trace_integral(const PathModel& model, int k) {
    model.validate();
    double bmax = 0.0;
    for (double b : model.ends) bmax = std::max(bmax, std::abs(b));
    for (double a : model.starts) bmax = std::max(bmax, std::abs(a));
    double L = bmax + 9.0;
    bool zero = model.zero_start();
    auto f = [&](double x) {
        return zero ? h_zero_sum(model, k, k, x, x) : h_general_a(model, k, k, x, x);
    };
    return integrate_panels(f, -L, L, 96, 16);
}

double calibrate_normalization(const PathModel& model) {
    PathModel unit = model;
    unit.normalization = 1.0;
    return model.n / trace_integral(unit, 0);
}

FiniteNBrownianKernel::FiniteNBrownianKernel(PathModel model, ZeroStartMethod method)
    : model_(std::move(model)), method_(method) {
    model_.validate();
    zero_start_ = model_.zero_start();
    if (!zero_start_) {
        int n = model_.n;
        Eigen::MatrixXd B(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                B(i, j) = std::exp(2.0 * model_.starts[i] * model_.ends[j]);
        blu_.compute(B);
        eb2_.resize(n);
        for (int i = 0; i < n; ++i) eb2_[i] = std::exp(model_.ends[i] * model_.ends[i]);
    }
}

double FiniteNBrownianKernel::entry(int i, int j, double x, double y, int dx, int dy) const {
    if (dx != 0 || dy != 0)
        throw std::logic_error("FiniteNBrownianKernel: derivatives are not provided");
    double h;
    if (zero_start_) {
        h = h_zero_start(model_, i, j, x, y, method_);
    } else {
        int n = model_.n;
        Eigen::VectorXd v(n);
        for (int q = 0; q < n; ++q)
            v(q) = std::exp(model_.starts[q] * model_.starts[q]) *
                   heat_p(y, model_.starts[q], model_.times[j]);
        Eigen::VectorXd w = blu_.solve(v);
        h = 0.0;
        for (int q = 0; q < n; ++q)
            h += heat_p(x, model_.ends[q], 1.0 - model_.times[i]) * eb2_[q] * w(q);
        h *= model_.normalization;
    }
    return h - finite_n_e(model_, i, j, x, y);
}

ScaledBrownianKernel::ScaledBrownianKernel(int n, TauGrid taus, double rotation)
    : n_(n), taus_(std::move(taus)), rotation_(rotation) {
    if (n_ < 4) throw std::domain_error("ScaledBrownianKernel: n must be >= 4");
    taus_.validate();
    double rn = std::sqrt(static_cast<double>(n_));
    double max_tau = 0.0;
    for (double t : taus_.taus) max_tau = std::max(max_tau, std::abs(t));
    if (2.0 * max_tau / rn >= 0.5)
        throw std::domain_error("ScaledBrownianKernel: taus too large for this n");

    double sin2t = std::sin(2.0 * rotation_);
    double T = std::clamp(std::sqrt(60.0 / (rn * sin2t)), 3.5, 8.5);
    double out_w = 2.0 / std::pow(static_cast<double>(n_), 0.25);
    trule_ = build_rule_hybrid(pearcey_t_contour(rotation_), T, 6, 0.5, out_w, 24);

    double U = 2.0;
    for (int iter = 0; iter < 300; ++iter) {
        double worst = -1e300;
        for (double t : taus_.taus) {
            double cc = (1.0 + 2.0 * t / rn) / (1.0 - 2.0 * t / rn);
            worst = std::max(worst, n_ * std::log1p(U * U / rn) - rn * cc * U * U);
        }
        if (worst < -60.0) break;
        U *= 1.1;
    }
    srule_ = build_rule_hybrid(imaginary_axis_contour(), U, 6, 0.5, 0.5, 24);

    const auto nt = static_cast<Eigen::Index>(trule_.size());
    const auto ns = static_cast<Eigen::Index>(srule_.size());
    inv_smt_.resize(nt, ns);
    for (Eigen::Index a = 0; a < nt; ++a)
        for (Eigen::Index b = 0; b < ns; ++b)
            inv_smt_(a, b) = 1.0 / (srule_.nodes[b] - trule_.nodes[a]);

    // Origin defect of the universal 1/(s-t) integral, as in the limiting
    // kernel evaluator.
    {
        Complex work = 0.0;
        for (Eigen::Index a = 0; a < nt; ++a) {
            Complex inner = 0.0;
            for (Eigen::Index b = 0; b < ns; ++b) inner += srule_.weights[b] * inv_smt_(a, b);
            work += trule_.weights[a] * inner;
        }
        QuadratureRule td = build_rule_hybrid(pearcey_t_contour(rotation_), T, 30, 0.5, out_w, 24);
        QuadratureRule sd = build_rule_hybrid(imaginary_axis_contour(), U, 30, 0.5, 0.5, 24);
        Complex deep = 0.0;
        for (std::size_t a = 0; a < td.size(); ++a) {
            Complex inner = 0.0;
            for (std::size_t b = 0; b < sd.size(); ++b)
                inner += sd.weights[b] / (sd.nodes[b] - td.nodes[a]);
            deep += td.weights[a] * inner;
        }
        origin_defect_ = deep - work;
    }

    int m = taus_.size();
    tbase_.resize(m);
    sbase_.resize(m);
    for (int kk = 0; kk < m; ++kk) {
        double tk = taus_[kk];
        double denom = 1.0 - 2.0 * tk / rn;
        double coef = rn * (1.0 + 2.0 * tk / rn) / denom;
        tbase_[kk].resize(nt);
        for (Eigen::Index a = 0; a < nt; ++a) {
            Complex t = trule_.nodes[a];
            Complex expo = -coef * t * t - static_cast<double>(n_) * std::log(1.0 - t * t / rn);
            tbase_[kk](a) = trule_.weights[a] * std::exp(expo);
        }
        sbase_[kk].resize(ns);
        for (Eigen::Index b = 0; b < ns; ++b) {
            Complex s = srule_.nodes[b];
            Complex expo = coef * s * s + static_cast<double>(n_) * std::log(1.0 - s * s / rn);
            sbase_[kk](b) = srule_.weights[b] * std::exp(expo);
        }
    }
}

Eigen::MatrixXcd ScaledBrownianKernel::raw_grid(int i, int j, const std::vector<double>& xs,
                                                const std::vector<double>& ys, int tpow,
                                                int spow) const {
    double rn = std::sqrt(static_cast<double>(n_));
    double di = 1.0 - 2.0 * taus_[i] / rn, dj = 1.0 - 2.0 * taus_[j] / rn;
    double cx = 4.0 / di, cy = 4.0 / dj;
    const auto nt = static_cast<Eigen::Index>(trule_.size());
    const auto ns = static_cast<Eigen::Index>(srule_.size());

    Eigen::MatrixXcd A(nt, static_cast<Eigen::Index>(xs.size()));
    for (Eigen::Index col = 0; col < A.cols(); ++col) {
        double x = xs[col];
        double xpref = -2.0 * x * x / (rn - 2.0 * taus_[i]);
        for (Eigen::Index a = 0; a < nt; ++a) {
            Complex t = trule_.nodes[a];
            Complex v = tbase_[i](a) * std::exp(cx * x * t + xpref);
            for (int p = 0; p < tpow; ++p) v *= t;
            A(a, col) = v;
        }
    }
    Eigen::MatrixXcd B(ns, static_cast<Eigen::Index>(ys.size()));
    for (Eigen::Index col = 0; col < B.cols(); ++col) {
        double y = ys[col];
        double ypref = 2.0 * y * y / (rn - 2.0 * taus_[j]);
        for (Eigen::Index b = 0; b < ns; ++b) {
            Complex s = srule_.nodes[b];
            Complex v = sbase_[j](b) * std::exp(-cy * y * s + ypref);
            for (int p = 0; p < spow; ++p) v *= -s;
            B(b, col) = v;
        }
    }
    double pref = -1.0 / (M_PI * M_PI * std::sqrt(di * dj));
    Eigen::MatrixXcd out = A.transpose() * (inv_smt_ * B);
    if (tpow == 0 && spow == 0) {
        // The defect correction rides along with the x/y prefactors.
        for (Eigen::Index p = 0; p < out.rows(); ++p)
            for (Eigen::Index q = 0; q < out.cols(); ++q) {
                double xpref = -2.0 * xs[p] * xs[p] / (rn - 2.0 * taus_[i]);
                double ypref = 2.0 * ys[q] * ys[q] / (rn - 2.0 * taus_[j]);
                out(p, q) += origin_defect_ * std::exp(xpref + ypref);
            }
    }
    return pref * out;
}

Eigen::MatrixXd ScaledBrownianKernel::h_grid(int i, int j, const std::vector<double>& xs,
                                             const std::vector<double>& ys, int dx,
                                             int dy) const {
    if (dx < 0 || dx > 1 || dy < 0 || dy > 1)
        throw std::domain_error("ScaledBrownianKernel: only first derivatives are supported");
    double rn = std::sqrt(static_cast<double>(n_));
    double di = 1.0 - 2.0 * taus_[i] / rn, dj = 1.0 - 2.0 * taus_[j] / rn;
    double cx = 4.0 / di, cy = 4.0 / dj;

    // Product rule over the Gaussian x/y prefactors plus monomial insertion.
    Eigen::MatrixXcd v00 = raw_grid(i, j, xs, ys, 0, 0);
    Eigen::MatrixXcd v = v00;
    if (dx == 1 && dy == 0) {
        v = cx * raw_grid(i, j, xs, ys, 1, 0);
        for (Eigen::Index p = 0; p < v.rows(); ++p)
            v.row(p) += (-4.0 * xs[p] / (rn - 2.0 * taus_[i])) * v00.row(p);
    } else if (dx == 0 && dy == 1) {
        v = cy * raw_grid(i, j, xs, ys, 0, 1);
        for (Eigen::Index q = 0; q < v.cols(); ++q)
            v.col(q) += (4.0 * ys[q] / (rn - 2.0 * taus_[j])) * v00.col(q);
    } else if (dx == 1 && dy == 1) {
        Eigen::MatrixXcd v10 = raw_grid(i, j, xs, ys, 1, 0);
        Eigen::MatrixXcd v01 = raw_grid(i, j, xs, ys, 0, 1);
        Eigen::MatrixXcd v11 = raw_grid(i, j, xs, ys, 1, 1);
        for (Eigen::Index p = 0; p < v.rows(); ++p)
            for (Eigen::Index q = 0; q < v.cols(); ++q) {
                double gx = -4.0 * xs[p] / (rn - 2.0 * taus_[i]);
                double gy = 4.0 * ys[q] / (rn - 2.0 * taus_[j]);
                v(p, q) = gx * gy * v00(p, q) + gx * cy * v01(p, q) + gy * cx * v10(p, q) +
                          cx * cy * v11(p, q);
            }
    }
    double max_im = v.imag().cwiseAbs().maxCoeff();
    double scale = std::max(1.0, v.real().cwiseAbs().maxCoeff());
    if (max_im > 1e-10 * scale)
        throw numeric_error("scaled kernel left an imaginary residue", max_im);
    return v.real();
}

double ScaledBrownianKernel::h(int i, int j, double x, double y, int dx, int dy) const {
    return h_grid(i, j, {x}, {y}, dx, dy)(0, 0);
}

ConvergenceScan convergence_scan(const std::vector<int>& ns, double box_lo, double box_hi,
                                 int grid_points, const TauGrid& taus, double rotation) {
    if (!(box_hi > box_lo) || grid_points < 2)
        throw std::domain_error("convergence_scan: bad box");
    std::vector<double> grid(grid_points);
    for (int g = 0; g < grid_points; ++g)
        grid[g] = box_lo + (box_hi - box_lo) * g / (grid_points - 1);

    KernelSpec spec;
    spec.tau_grid = taus;
    spec.form = KernelForm::HigherOrder;
    spec.order_R = 1;
    ExtendedPearceyKernel limit(spec);
    int m = taus.size();

    ConvergenceScan scan;
    scan.ns = ns;
    for (int n : ns) {
        ScaledBrownianKernel fin(n, taus, rotation);
        double err0 = 0.0, err1 = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                std::vector<Eigen::MatrixXd> lim;
                limit.eval_block_h(i, j, grid, grid, {{0, 0}, {1, 0}}, lim);
                Eigen::MatrixXd f0 = fin.h_grid(i, j, grid, grid, 0, 0);
                Eigen::MatrixXd f1 = fin.h_grid(i, j, grid, grid, 1, 0);
                err0 = std::max(err0, (f0 - lim[0]).cwiseAbs().maxCoeff());
                err1 = std::max(err1, (f1 - lim[1]).cwiseAbs().maxCoeff());
            }
        scan.sup_err.push_back(err0);
        scan.sup_err_dx.push_back(err1);
    }

    auto slope = [&](const std::vector<double>& errs) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int c = static_cast<int>(errs.size());
        for (int q = 0; q < c; ++q) {
            double lx = std::log(static_cast<double>(ns[q])), ly = std::log(errs[q]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        return (c * sxy - sx * sy) / (c * sxx - sx * sx);
    };
    if (ns.size() >= 2) {
        scan.slope = slope(scan.sup_err);
        scan.slope_dx = slope(scan.sup_err_dx);
    }
    return scan;
}

} // namespace pearcey

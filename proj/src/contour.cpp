#include "pearcey/contour.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pearcey/gauss.hpp"

namespace pearcey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex unit(double arg) { return {std::cos(arg), std::sin(arg)}; }

Segment ray_in(double arg) { return Segment{Complex(0.0, 0.0), unit(arg), kInf, true}; }
Segment ray_out(double arg) { return Segment{Complex(0.0, 0.0), unit(arg), kInf, false}; }

// X-shaped contour with inner half-angle alpha, rays rotated toward the real
// axis by theta. Listing order: in from the first quadrant, in from the
// third, out to the fourth, out to the second.
ContourPath x_contour(double alpha, double theta) {
    ContourPath path;
    path.segments.push_back(ray_in(alpha - theta));
    path.segments.push_back(ray_in(-(M_PI - alpha) - theta));
    path.segments.push_back(ray_out(-(alpha - theta)));
    path.segments.push_back(ray_out(M_PI - alpha + theta));
    return path;
}

void append_panels(QuadratureRule& rule, const Segment& seg,
                   const std::vector<double>& bounds, int nodes_per_panel) {
    const GaussRule& g = gauss_legendre(nodes_per_panel);
    Complex dir = seg.direction();
    for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
        double a = bounds[p], b = bounds[p + 1];
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (int i = 0; i < nodes_per_panel; ++i) {
            double r = mid + half * g.nodes[i];
            rule.nodes.push_back(seg.anchor + seg.outward * r);
            rule.weights.push_back(dir * (half * g.weights[i]));
        }
    }
}

} // namespace

ContourPath pearcey_t_contour(double rotation) {
    if (!(rotation >= 0.0 && rotation < M_PI / 8.0))
        throw std::domain_error("pearcey_t_contour: rotation must lie in [0, pi/8)");
    return x_contour(M_PI / 4.0, rotation);
}

ContourPath imaginary_axis_contour() {
    ContourPath path;
    path.segments.push_back(ray_in(-M_PI / 2.0));  // -i*inf -> 0
    path.segments.push_back(ray_out(M_PI / 2.0));  // 0 -> +i*inf
    return path;
}

ContourPath higher_order_t_contour(int order_R) {
    if (order_R < 1) throw std::domain_error("higher_order_t_contour: order_R must be >= 1");
    double alpha = order_R * M_PI / (2.0 * order_R + 2.0);
    return x_contour(alpha, 0.0);
}

ContourPath segment_path(Complex from, Complex to) {
    double len = std::abs(to - from);
    if (len == 0.0) throw std::domain_error("segment_path: zero-length segment");
    ContourPath path;
    path.segments.push_back(Segment{from, (to - from) / len, len, false});
    return path;
}

QuadratureRule build_rule(const ContourPath& path, double truncation_radius,
                          int panels, int nodes_per_panel, double grading) {
    if (truncation_radius <= 0.0) throw std::domain_error("build_rule: truncation_radius must be > 0");
    if (panels < 2) throw std::domain_error("build_rule: panels must be >= 2");
    if (nodes_per_panel < 1) throw std::domain_error("build_rule: nodes_per_panel must be >= 1");
    if (!(grading > 0.0 && grading < 1.0)) throw std::domain_error("build_rule: grading must be in (0,1)");

    QuadratureRule rule;
    rule.truncation_radius = truncation_radius;
    rule.panel_grading = grading;
    rule.nodes_per_panel = nodes_per_panel;
    for (const Segment& seg : path.segments) {
        double len = std::min(seg.length, truncation_radius);
        // Geometric boundaries L*g^{panels-1} < ... < L, innermost panel open at 0.
        std::vector<double> bounds(panels + 1);
        bounds[0] = 0.0;
        for (int p = 1; p <= panels; ++p) bounds[p] = len * std::pow(grading, panels - p);
        append_panels(rule, seg, bounds, nodes_per_panel);
    }
    return rule;
}

QuadratureRule build_rule_hybrid(const ContourPath& path, double truncation_radius,
                                 int core_panels, double core_radius,
                                 double outer_panel_width, int nodes_per_panel,
                                 double grading) {
    if (truncation_radius <= 0.0 || core_radius <= 0.0 || outer_panel_width <= 0.0)
        throw std::domain_error("build_rule_hybrid: sizes must be > 0");
    if (core_panels < 2 || nodes_per_panel < 1)
        throw std::domain_error("build_rule_hybrid: panel counts must be positive");

    QuadratureRule rule;
    rule.truncation_radius = truncation_radius;
    rule.panel_grading = grading;
    rule.nodes_per_panel = nodes_per_panel;
    for (const Segment& seg : path.segments) {
        double len = std::min(seg.length, truncation_radius);
        double core = std::min(core_radius, len);
        std::vector<double> bounds;
        bounds.push_back(0.0);
        for (int p = 1; p <= core_panels; ++p)
            bounds.push_back(core * std::pow(grading, core_panels - p));
        if (len > core) {
            int outer = static_cast<int>(std::ceil((len - core) / outer_panel_width));
            double w = (len - core) / outer;
            for (int p = 1; p <= outer; ++p) bounds.push_back(core + p * w);
        }
        append_panels(rule, seg, bounds, nodes_per_panel);
    }
    return rule;
}

QuadratureRule circle_rule(Complex center, double radius, int n_points) {
    if (radius <= 0.0 || n_points < 4) throw std::domain_error("circle_rule: bad parameters");
    QuadratureRule rule;
    rule.truncation_radius = radius;
    rule.nodes_per_panel = n_points;
    double dtheta = 2.0 * M_PI / n_points;
    for (int k = 0; k < n_points; ++k) {
        double theta = k * dtheta;
        Complex e = unit(theta);
        rule.nodes.push_back(center + radius * e);
        rule.weights.push_back(Complex(0.0, 1.0) * radius * e * dtheta);
    }
    return rule;
}

} // namespace pearcey

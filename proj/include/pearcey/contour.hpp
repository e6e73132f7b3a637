#ifndef PEARCEY_CONTOUR_HPP
#define PEARCEY_CONTOUR_HPP

#include <complex>
#include <vector>

namespace pearcey {

using Complex = std::complex<double>;

/// One oriented straight piece of a contour. Rays are anchored at their
/// finite endpoint; `incoming` means traversal runs from the far end toward
/// the anchor, so the travel direction is -outward.
struct Segment {
    Complex anchor;   // finite endpoint (the origin for the X-shaped contours)
    Complex outward;  // unit vector from the anchor along the segment
    double length;    // may be +infinity for rays
    bool incoming = false;

    Complex direction() const { return incoming ? -outward : outward; }
};

/// Oriented piecewise-straight path; orientation follows the listing order.
struct ContourPath {
    std::vector<Segment> segments;
};

/// The X-shaped Pearcey t-contour through 0: rays in from infinity at
/// arguments pi/4 and -3pi/4, out to infinity at -pi/4 and 3pi/4.
/// rotation > 0 moves every ray argument toward the real axis by that angle
/// (must stay below pi/8 so that Re t^2 > 0 and Re t^4 < 0 hold off-axis).
ContourPath pearcey_t_contour(double rotation = 0.0);

/// The s-contour: up the imaginary axis, -i*inf -> 0 -> +i*inf.
ContourPath imaginary_axis_contour();

/// Order-R analogue of the t-contour. Ray arguments are +-R*pi/(2R+2) and
/// pi -+ R*pi/(2R+2); on each ray (-1)^{R+1} t^{2R+2} is negative real.
/// R = 1 reproduces pearcey_t_contour(0).
ContourPath higher_order_t_contour(int order_R);

/// Single finite segment from one point to another.
ContourPath segment_path(Complex from, Complex to);

/// Nodes/weights realizing the contour integral; weights carry the segment
/// direction factor, so integrate(f) = sum w_i f(z_i) approximates
/// the oriented path integral of f.
struct QuadratureRule {
    std::vector<Complex> nodes;
    std::vector<Complex> weights;
    double truncation_radius = 0.0;
    double panel_grading = 0.5;
    int nodes_per_panel = 0;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    Complex integrate(F&& f) const {
        // Fixed summation order: storage order (segments as listed, panels
        // from the anchor outward).
        Complex acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Gauss nodes on geometrically graded panels running from each segment's
/// anchor outward, truncated at truncation_radius. Panels shrink toward the
/// anchor by the grading ratio; no node falls on the anchor itself.
QuadratureRule build_rule(const ContourPath& path, double truncation_radius,
                          int panels, int nodes_per_panel, double grading = 0.5);

/// Variant for integrands that oscillate away from the origin: geometric
/// grading on [0, core_radius], then uniform panels of at most
/// outer_panel_width up to truncation_radius.
QuadratureRule build_rule_hybrid(const ContourPath& path, double truncation_radius,
                                 int core_panels, double core_radius,
                                 double outer_panel_width, int nodes_per_panel,
                                 double grading = 0.5);

/// Closed circle traversed counterclockwise (trapezoid rule; spectrally
/// accurate for integrands analytic in an annulus around the circle).
QuadratureRule circle_rule(Complex center, double radius, int n_points);

} // namespace pearcey

#endif

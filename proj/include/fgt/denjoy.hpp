#pragma once

#include <vector>

#include "fgt/moebius.hpp"

namespace fgt {

// Finite union of closed intervals on the real line, kept sorted and
// disjoint (adjacent intervals merge at tolerance 1e-12).
class IntervalUnion {
public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<std::pair<double, double>> intervals);

    const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
    bool empty() const { return iv_.empty(); }
    double total_length() const;
    double diameter() const;
    double min() const;
    double max() const;
    bool contains(double x) const;

    // Lebesgue measure of the intersection with (a, b)
    double intersection_length(double a, double b) const;
    // measure of the intersection with (x - t, x + t); exact when x is an
    // interval endpoint
    double intersection_length_centered(double x, double t) const;

    // affine image a*E + b, a > 0
    IntervalUnion scaled(double a, double b) const;

private:
    std::vector<std::pair<double, double>> iv_;
    std::vector<double> prefix_;  // cumulative length up to iv_[k].first
};

// default grid: 64 logarithmic points per decade from diam*1e-6 up to diam
std::vector<double> default_t_grid(double diameter);

// Smallest sampled ratio |E cap (x-t, x+t)| / t over x in E and t in
// (0, diam E).  x runs over all interval endpoints plus a uniform grid
// restricted to E; intersection lengths are exact.
double homogeneity_constant(const IntervalUnion& E, const std::vector<double>& t_grid = {},
                            int x_grid = 256);

// Cantor-type construction: at each level remove the central
// removed_fraction of every interval, starting from [0,1].
IntervalUnion cantor_set(int levels, double removed_fraction);

struct HomogeneityScales {
    double value = 0.0;                              // at the requested epsilon
    std::vector<std::pair<double, double>> scales;   // (epsilon, value) triples
};

// Cover the sample points by intervals of length epsilon, merge, and measure
// homogeneity; also reports the value at epsilon/4 and epsilon/16.
HomogeneityScales limit_set_homogeneity(const std::vector<double>& points, double epsilon);

}  // namespace fgt

#pragma once

#include <vector>

#include "fgt/group.hpp"

namespace fgt {

// Perpendicular bisector between the base point and one orbit point, i.e. one
// potential side of the Dirichlet domain.  In the disk model every bisector
// is a circle orthogonal to the unit circle and the domain lies outside it.
// In the halfplane model a bisector is a circle centered on the real axis
// (domain outside when the orbit point lies below the base, inside when
// above) or a vertical line.
struct Bisector {
    bool is_line = false;
    double line_x = 0.0;
    bool keep_left = false;  // for lines: which side contains the base
    cplx center{0.0};
    double radius = 0.0;
    bool keep_inside = false;
    std::size_t entry_index = 0;
};

struct GeodesicSide {
    Bisector geometry;
    Word pairing_word;
};

struct BoundaryArc {
    double lo = 0.0, hi = 0.0;  // angles in the disk model, x-range on the line
    double length() const { return hi - lo; }
};

struct CuspInfo {
    cplx position{0.0};     // boundary point (on |z|=1 or on the real axis)
    double coordinate = 0;  // angle (disk) or x (halfplane)
    Word parabolic_word;
    double radius_a = 0.0, radius_b = 0.0;  // adjacent side circle radii
    std::size_t side_a = 0, side_b = 0;     // table entry indices of the sides
};

struct InfinityBoundary {
    Model model = Model::disk;
    std::vector<BoundaryArc> free_arcs;
    std::vector<CuspInfo> cusps;
    double free_measure = 0.0;  // total angular / linear measure of free arcs
    double window_lo = 0.0, window_hi = 0.0;  // halfplane reporting window
    bool unbounded_tails = false;             // halfplane: rays beyond window are free
    int depth = 0;
};

// Dirichlet fundamental domain of the truncated group, centered at 0 in the
// disk and at i in the halfplane.  The view is an over-approximation: deeper
// tables only shrink it.
class FundamentalDomainView {
public:
    explicit FundamentalDomainView(const OrbitTable& table);

    const OrbitTable& table() const { return *table_; }
    Model model() const { return model_; }
    cplx base_point() const;

    // z is in the domain when no orbit point is strictly closer than the
    // base; boundary points count as inside (tie tolerance 1e-12).
    bool membership(cplx z) const;
    bool membership(const ModelPoint& z) const;

    // bisectors in membership-test order (largest excluded region first)
    const std::vector<Bisector>& bisectors() const { return bisectors_; }

    // bisectors that actually support a piece of the domain boundary
    std::vector<GeodesicSide> sides() const;

    // free arcs and cusp points of the boundary at infinity
    InfinityBoundary infinite_boundary(double resolution) const;

    // polyline approximation of the full domain boundary (geodesic sides plus
    // free boundary arcs); disk model only.  relative_error controls polyline
    // density.
    std::vector<std::vector<cplx>> boundary_polyline(double relative_error = 1e-4) const;

    // Euclidean length of the boundary of the tile word(F); disk model only
    double tile_boundary_length(const Word& word, double relative_error = 1e-4) const;
    double tile_boundary_length(const MoebiusMap& map, double relative_error = 1e-4) const;

    // cumulative tile boundary lengths by word length, with per-level sums
    struct LengthSums {
        std::vector<double> partial_sums;
        std::vector<double> level_increments;
    };
    LengthSums length_sum_partials(int max_depth, double relative_error = 1e-4) const;

private:
    const OrbitTable* table_;
    Model model_;
    std::vector<Bisector> bisectors_;  // sorted by descending radius

    bool excluded_by(const Bisector& b, cplx z, double tol) const;
    std::vector<std::size_t> supported_side_indices() const;
};

// locate the tile containing z: index of the table entry g minimizing the
// distance from g(z) to the base point.  `frontier` is set when the best
// word sits on the truncation frontier, so the true minimizer may be deeper.
struct LocateResult {
    std::size_t entry_index = 0;
    bool frontier = false;
};
LocateResult locate_tile(const OrbitTable& table, cplx z);

}  // namespace fgt

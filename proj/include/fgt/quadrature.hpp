#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fgt/beltrami.hpp"
#include "fgt/fundomain.hpp"

namespace fgt {

enum class Weight {
    disk_carleson,     // 1 / (1 - |z|^2)
    halfplane_carleson,  // 1 / Im z
    halfplane_area       // 1 / (4 (Im z)^2)
};

const char* to_string(Weight w);

// One boundary-cap query: integrate |mu|^2 * weight over B(xi, r) within the
// model, optionally restricted to the fundamental domain.
struct CarlesonQuery {
    cplx xi{1.0};
    double r = 0.5;
    Weight weight = Weight::disk_carleson;
    Model model = Model::disk;
    const FundamentalDomainView* restriction = nullptr;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int refinement_levels = 0;
    bool diverged = false;
    double growth_per_level = 0.0;  // last observed shell-increment ratio
    bool truncated = false;         // refinement budget hit before tolerance
};

// Adaptive integration of |field|^2 * weight over the boundary cap.  The cap
// is split into dyadic shells by distance to the model boundary; a
// non-integrable boundary singularity shows up as shell increments that stop
// decaying (ratio >= 0.5 over 4 consecutive shells), which raises the
// diverged flag.  Fields with simple slice structure are integrated with
// exact per-slice measures; general fields fall back to adaptive cells with
// a 1e-5*r floor scale and 16-point fractional sampling at the floor.
IntegralResult box_integral(const BeltramiField& field, const CarlesonQuery& query, double tol);

// box_integral with the membership characteristic multiplied in
IntegralResult restricted_integral(const BeltramiField& field, const CarlesonQuery& query,
                                   double tol);

// integral of the weight alone over the (restricted) cap, e.g. hyperbolic
// area for Weight::halfplane_area
IntegralResult weighted_area(const CarlesonQuery& query, double tol);

// Angular integral across the cusp sector pinched between two boundary
// circles of radii r_a, r_b tangent at the cusp, at polar distance r from
// the cusp: (1/(4r)) (x_a/sqrt(1-x_a^2) + x_b/sqrt(1-x_b^2)), x = r/(2 rad);
// tends to (1/8)(1/r_a + 1/r_b) as r -> 0.
double cusp_inner_integral(double r, double r_a, double r_b);

// integral of the inner integral over r in (0, R]; the hyperbolic area of
// the sector out to radius R
double cusp_sector_integral(double r_a, double r_b, double R, double tol = 1e-10);

// explicit area bound: inner(1) * 1, valid since the inner integral is
// increasing in r; requires 2 min(r_a, r_b) > 1
double cusp_area_bound(double r_a, double r_b);

struct OrbitDecompositionResult {
    IntegralResult lhs;
    double rhs = 0.0;
    double residual = 0.0;
    std::vector<double> rhs_level_increments;  // rhs contribution per word length
    std::size_t active_terms = 0;              // terms surviving the support prefilter
};

// Both sides of the orbit change-of-variables identity: the cap integral of
// the extended field versus the sum over enumerated elements of the
// transported integral over the fundamental domain.
OrbitDecompositionResult orbit_decomposition_check(const InvariantExtensionField& field,
                                                   const CarlesonQuery& query, double tol);

struct CarlesonRow {
    cplx xi{0.0};
    double r = 0.0;
    double value = 0.0;
    double ratio = 0.0;
    bool diverged = false;
    bool truncated = false;
};

struct CarlesonReport {
    std::vector<CarlesonRow> rows;
    double sup_ratio = 0.0;
    std::size_t argmax_index = 0;
    std::string restriction_descriptor;
    int depth = 0;
    bool any_diverged = false;
    bool any_truncated = false;
};

CarlesonReport carleson_norm_estimate(const BeltramiField& field, const std::vector<cplx>& xis,
                                      const std::vector<double>& rs, Weight weight, Model model,
                                      const FundamentalDomainView* restriction, double tol,
                                      int workers = 1);

// plain adaptive quadrature of f over an axis-aligned rectangle (test oracle
// style entry point, also used for the orbit sum terms)
double integrate_rectangle(const std::function<double(cplx)>& f, cplx lo, cplx hi, double tol,
                           double floor_scale);

}  // namespace fgt

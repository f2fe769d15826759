#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fgt/quadrature.hpp"

using namespace fgt;

namespace {

// area of B(xi,r) cap the unit disk for |xi| = 1 (two-circle lens)
double lens_area(double r) {
    double d = 1.0;
    double a1 = r * r * std::acos((d * d + r * r - 1.0) / (2.0 * d * r));
    double a2 = std::acos((d * d + 1.0 - r * r) / (2.0 * d));
    double a3 = 0.5 * std::sqrt((r + 2.0) * r * r * (2.0 - r));
    return a1 + a2 - a3;
}

// independent 2-D quadrature of 1/(4 v^2) over the cusp sector: pointwise
// characteristic tests on dyadic v-stripes; each stripe is windowed in x by
// the circle geometry so the narrow sliver near the cusp is resolved
double sector_area_oracle(double r_a, double r_b, double R) {
    auto inside = [&](double x, double v) {
        if (v <= 0.0) return false;
        if (x * x + v * v >= R * R) return false;
        if ((x - r_b) * (x - r_b) + v * v <= r_b * r_b) return false;  // right circle
        if ((x + r_a) * (x + r_a) + v * v <= r_a * r_a) return false;  // left circle
        return true;
    };
    double total = 0.0;
    double v_top = R, v_floor = 1e-7 * R;
    double v_hi = v_top;
    while (v_hi > v_floor) {
        double v_lo = std::max(0.5 * v_hi, v_floor);
        // bounding window for the admissible x at heights <= v_hi
        double x0 = -R, x1 = R;
        double cap = std::min(std::min(r_a, r_b), R);
        if (v_hi < 0.5 * cap) {
            x0 = -1.5 * (r_a - std::sqrt(r_a * r_a - v_hi * v_hi));
            x1 = 1.5 * (r_b - std::sqrt(r_b * r_b - v_hi * v_hi));
        }
        std::function<double(double, double, int)> strip = [&](double a0, double a1, int depth) {
            auto est = [&](double a, double b) {
                double acc = 0.0;
                const int nx = 4, nv = 4;
                for (int i = 0; i < nx; ++i)
                    for (int j = 0; j < nv; ++j) {
                        double x = a + (b - a) * (2.0 * i + 1.0) / (2.0 * nx);
                        double v = v_lo + (v_hi - v_lo) * (2.0 * j + 1.0) / (2.0 * nv);
                        if (inside(x, v)) acc += 1.0 / (4.0 * v * v);
                    }
                return acc / (nx * nv) * (b - a) * (v_hi - v_lo);
            };
            double whole = est(a0, a1);
            double xm = 0.5 * (a0 + a1);
            double halves = est(a0, xm) + est(xm, a1);
            if (depth >= 3 && (depth >= 16 ||
                               std::abs(whole - halves) < 1e-10 * (1.0 + std::abs(halves))))
                return halves;
            return strip(a0, xm, depth + 1) + strip(xm, a1, depth + 1);
        };
        total += strip(x0, x1, 0);
        v_hi = v_lo;
    }
    // analytic bound on the missed sliver below v_floor: width <= v^2 (1/ra + 1/rb)
    total += 0.125 * (1.0 / r_a + 1.0 / r_b) * v_floor;
    return total;
}

std::shared_ptr<OrbitTable> trivial_disk_table() {
    GeneratorSet empty;
    empty.model = Model::disk;
    return std::make_shared<OrbitTable>(enumerate_group(empty, 1));
}

}  // namespace

TEST_CASE("box integral: zero field") {
    CarlesonQuery q;
    q.xi = cplx(1.0, 0.0);
    q.r = 0.5;
    auto z0 = zero_field(Model::disk);
    IntegralResult res = box_integral(*z0, q, 1e-6);
    CHECK(res.value == 0.0);
    CHECK(!res.diverged);
}

TEST_CASE("box integral: power decay 1/2 reduces to the cap area") {
    auto field = power_decay_field(0.5, 0.5);
    for (double r : {0.3, 0.7, 1.2}) {
        CarlesonQuery q;
        q.xi = cplx(1.0, 0.0);
        q.r = r;
        IntegralResult res = box_integral(*field, q, 1e-7);
        double expect = 0.25 * lens_area(r);
        CHECK(!res.diverged);
        CHECK(std::abs(res.value - expect) < 1e-4 * expect);
        CHECK(res.error_estimate < 1e-6);
    }
    // cross-check the lens formula itself with the rectangle integrator
    double r = 0.7;
    cplx xi(1.0, 0.0);
    auto chi = [&](cplx z) {
        return (std::abs(z) < 1.0 && std::abs(z - xi) < r) ? 1.0 : 0.0;
    };
    double area = integrate_rectangle(chi, cplx(1.0 - r, -r), cplx(1.0, r), 1e-6, 1e-5);
    CHECK(std::abs(area - lens_area(r)) < 1e-4 * lens_area(r));
}

TEST_CASE("box integral: constant field diverges on every cap") {
    auto field = constant_field(Model::disk, 0.3);
    for (double r : {0.25, 0.5, 1.0}) {
        CarlesonQuery q;
        q.xi = std::polar(1.0, 0.7);
        q.r = r;
        IntegralResult res = box_integral(*field, q, 1e-6);
        CHECK(res.diverged);
        CHECK(res.growth_per_level >= 0.5);
    }
}

TEST_CASE("box integral: divergence detector stays quiet for integrable decay") {
    for (double alpha : {0.5, 1.0}) {
        auto field = power_decay_field(0.5, alpha);
        for (double r : {0.3, 0.9}) {
            CarlesonQuery q;
            q.xi = std::polar(1.0, -1.2);
            q.r = r;
            IntegralResult res = box_integral(*field, q, 1e-7);
            CHECK(!res.diverged);
        }
    }
}

TEST_CASE("restricted integral: trivial group restriction changes nothing") {
    auto table = trivial_disk_table();
    FundamentalDomainView fd(*table);
    auto field = power_decay_field(0.4, 0.5);
    CarlesonQuery q;
    q.xi = cplx(0.0, 1.0);
    q.r = 0.6;
    IntegralResult plain = box_integral(*field, q, 1e-7);
    q.restriction = &fd;
    IntegralResult restr = restricted_integral(*field, q, 1e-7);
    CHECK(std::abs(plain.value - restr.value) < 2e-7);
}

TEST_CASE("restricted integral: support away from the cap gives zero") {
    auto field = constant_on_disks(Model::disk, 0.5, {Disk{cplx(-0.5, 0.0), 0.2}});
    CarlesonQuery q;
    q.xi = cplx(1.0, 0.0);
    q.r = 0.2;
    IntegralResult res = box_integral(*field, q, 1e-7);
    CHECK(res.value == 0.0);
}

TEST_CASE("cusp inner integral: closed forms and the r -> 0 limit") {
    CHECK(std::abs(cusp_inner_integral(1.0, 1.0, 1.0) - 1.0 / (2.0 * std::sqrt(3.0))) < 1e-14);

    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uni(0.5, 4.0);
    for (int i = 0; i < 10; ++i) {
        double ra = uni(rng), rb = uni(rng);
        double limit = 0.125 * (1.0 / ra + 1.0 / rb);
        double at_small = cusp_inner_integral(1e-6, ra, rb);
        CHECK(std::abs(at_small - limit) < 1e-6 * limit);
    }
    CHECK_THROWS_AS(cusp_inner_integral(3.0, 1.0, 1.0), error);
}

TEST_CASE("cusp inner integral is increasing in r") {
    double prev = 0.0;
    for (double r = 0.05; r <= 1.9; r += 0.05) {
        double v = cusp_inner_integral(r, 1.0, 1.3);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("cusp sector integral: arcsin antiderivative and 2-D oracle") {
    // d/dr [arcsin(r/(2c))] = 1/(2c sqrt(1-(r/2c)^2)) matches the inner
    // integrand termwise, so the sector integral has a closed form
    double closed = 0.25 * (std::asin(0.5) + std::asin(0.5));
    CHECK(std::abs(cusp_sector_integral(1.0, 1.0, 1.0) - closed) < 1e-9);
    CHECK(std::abs(closed - M_PI / 12.0) < 1e-15);

    double q2d = sector_area_oracle(1.0, 1.0, 1.0);
    CHECK(std::abs(cusp_sector_integral(1.0, 1.0, 1.0) - q2d) < 1e-5 * q2d);

    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> uni(0.6, 3.0);
    for (int i = 0; i < 10; ++i) {
        double ra = uni(rng), rb = uni(rng);
        double R = std::min(1.0, 0.9 * 2.0 * std::min(ra, rb));
        double lib = cusp_sector_integral(ra, rb, R);
        double closed_form = 0.25 * (std::asin(R / (2.0 * ra)) + std::asin(R / (2.0 * rb)));
        CHECK(std::abs(lib - closed_form) < 1e-8 * closed_form);
        double oracle = sector_area_oracle(ra, rb, R);
        CHECK(std::abs(lib - oracle) < 1e-5 * std::abs(oracle));
    }
}

TEST_CASE("cusp area bound") {
    double b = cusp_area_bound(1.0, 1.0);
    CHECK(std::abs(b - 1.0 / (2.0 * std::sqrt(3.0))) < 1e-14);
    CHECK(cusp_sector_integral(1.0, 1.0, 1.0) <= b);

    // scales like 1/r for equal radii: r * bound(r, r) decreases to 1/4
    double p1 = 1.0 * cusp_area_bound(1.0, 1.0);
    double p2 = 2.0 * cusp_area_bound(2.0, 2.0);
    double p4 = 4.0 * cusp_area_bound(4.0, 4.0);
    CHECK(p1 > p2);
    CHECK(p2 > p4);
    CHECK(p4 > 0.25);
    CHECK(std::abs(p4 - 0.25) < 0.01 * 0.25);

    // huge radii approach the small-r limit value
    double bh = cusp_area_bound(200.0, 300.0);
    CHECK(std::abs(bh - 0.125 * (1.0 / 200.0 + 1.0 / 300.0)) < 1e-6 * bh);

    CHECK_THROWS_AS(cusp_area_bound(0.4, 0.4), error);
}

TEST_CASE("weighted area over a cusp neighborhood matches the sector closed form") {
    OrbitTable t = enumerate_group(rubel_ryff_generators(2), 2);
    FundamentalDomainView fd(t);
    CarlesonQuery q;
    q.xi = cplx(0.0, 0.0);
    q.r = 1.0;
    q.weight = Weight::halfplane_area;
    q.model = Model::halfplane;
    q.restriction = &fd;
    IntegralResult area = weighted_area(q, 1e-7);
    CHECK(!area.diverged);
    CHECK(std::abs(area.value - M_PI / 12.0) < 5e-6);
}

TEST_CASE("orbit decomposition: zero field and trivial group") {
    auto table = trivial_disk_table();
    auto zero_base = zero_field(Model::disk);
    auto ext0 = invariant_extension(zero_base, table);
    CarlesonQuery q;
    q.xi = cplx(1.0, 0.0);
    q.r = 0.8;
    CHECK_THROWS_AS(orbit_decomposition_check(*ext0, q, 1e-6), error);  // no support disks

    auto base = constant_on_disks(Model::disk, 0.5, {Disk{cplx(0.0), 0.3}});
    auto ext = invariant_extension(base, table);
    q.r = 1.2;
    OrbitDecompositionResult od = orbit_decomposition_check(*ext, q, 1e-6);
    CHECK(od.active_terms == 1);
    CHECK(od.residual < 5e-6);
}

TEST_CASE("orbit decomposition: schottky pair at moderate depth") {
    GeneratorSet gens = schottky_pair_generators({{{-3.0, 1.0}, {3.0, 1.0}}});
    auto table = std::make_shared<OrbitTable>(cayley_conjugate(enumerate_group(gens, 4)));
    auto base = constant_on_disks(Model::disk, 0.5, {Disk{cplx(0.0), 0.2}});
    auto ext = invariant_extension(base, table);

    cplx direction(1.0, 0.0);
    for (const OrbitEntry& e : table->entries)
        if (e.word_length == 1) {
            direction = e.base_image / std::abs(e.base_image);
            break;
        }
    CarlesonQuery q;
    q.xi = direction;
    q.r = 1.2;
    OrbitDecompositionResult od = orbit_decomposition_check(*ext, q, 1e-5);
    CHECK(!od.lhs.diverged);
    CHECK(od.lhs.value > 1e-4);  // the cap actually sees the field
    CHECK(od.residual < 5e-5);
}

TEST_CASE("carleson norm estimate: zero and power fields") {
    auto z0 = zero_field(Model::disk);
    std::vector<cplx> xis{cplx(1.0, 0.0), std::polar(1.0, 2.0)};
    std::vector<double> rs{1.0, 0.5, 0.25};
    CarlesonReport rep = carleson_norm_estimate(*z0, xis, rs, Weight::disk_carleson, Model::disk,
                                                nullptr, 1e-6);
    CHECK(rep.sup_ratio == 0.0);
    CHECK(!rep.any_diverged);

    auto pd = power_decay_field(0.5, 0.5);
    CarlesonReport rep2 = carleson_norm_estimate(*pd, xis, rs, Weight::disk_carleson, Model::disk,
                                                 nullptr, 1e-6);
    CHECK(!rep2.any_diverged);
    CHECK(rep2.sup_ratio <= 2.0 * M_PI * 0.25);
    CHECK(rep2.rows.size() == 6);
}

TEST_CASE("additivity over disjoint supports") {
    std::vector<Disk> d1{Disk{cplx(0.2, 0.3), 0.1}};
    std::vector<Disk> d2{Disk{cplx(-0.3, 0.2), 0.15}};
    std::vector<Disk> both = d1;
    both.push_back(d2[0]);
    auto f1 = constant_on_disks(Model::disk, 0.5, d1);
    auto f2 = constant_on_disks(Model::disk, 0.5, d2);
    auto f12 = constant_on_disks(Model::disk, 0.5, both);
    CarlesonQuery q;
    q.xi = std::polar(1.0, 1.0);
    q.r = 1.5;
    double tol = 1e-6;
    IntegralResult r1 = box_integral(*f1, q, tol);
    IntegralResult r2 = box_integral(*f2, q, tol);
    IntegralResult r12 = box_integral(*f12, q, tol);
    CHECK(std::abs(r12.value - (r1.value + r2.value)) < 2.0 * tol);
}

TEST_CASE("monotonicity in the cap radius") {
    auto field = power_decay_field(0.5, 0.5);
    double prev = 0.0;
    for (double r : {0.1, 0.2, 0.4, 0.8, 1.2, 1.6}) {
        CarlesonQuery q;
        q.xi = cplx(1.0, 0.0);
        q.r = r;
        double v = box_integral(*field, q, 1e-7).value;
        CHECK(v >= prev - 1e-9);
        prev = v;
    }
}

TEST_CASE("halfplane weight comparison on low caps") {
    // pointwise 1/v <= 1/v^2 for v <= 1, so the cap integrals obey
    // int 1/v <= 4 int 1/(4 v^2)
    auto field = constant_on_disks(Model::halfplane, 0.5, {Disk{cplx(0.0, 0.2), 0.15}});
    CarlesonQuery q;
    q.xi = cplx(0.0, 0.0);
    q.r = 0.5;
    q.model = Model::halfplane;
    q.weight = Weight::halfplane_carleson;
    double v1 = box_integral(*field, q, 1e-7).value;
    q.weight = Weight::halfplane_area;
    double v2 = box_integral(*field, q, 1e-7).value;
    CHECK(v1 <= 4.0 * v2 + 1e-6);
}

TEST_CASE("result invariants") {
    auto field = power_decay_field(0.5, 0.5);
    CarlesonQuery q;
    q.xi = cplx(1.0, 0.0);
    q.r = 0.9;
    IntegralResult res = box_integral(*field, q, 1e-6);
    CHECK(!res.diverged);
    CHECK(!res.truncated);
    CHECK(res.error_estimate < 1e-6);
    CHECK(res.refinement_levels > 4);

    CHECK_THROWS_AS(box_integral(*field, CarlesonQuery{cplx(0.5, 0.0), 0.5}, 1e-6), error);
    CarlesonQuery bad;
    bad.r = 3.0;
    bad.xi = cplx(1.0, 0.0);
    CHECK_THROWS_AS(box_integral(*field, bad, 1e-6), error);
}

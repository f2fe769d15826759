#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fgt/moebius.hpp"

using namespace fgt;

namespace {

MoebiusMap from_entries(cplx a, cplx b, cplx c, cplx d, Model m = Model::halfplane) {
    MoebiusMap f{a, b, c, d, Orientation::conformal, m};
    f = normalized(f);
    f.model = m;
    return f;
}

// random disk automorphism in SU(1,1) form
MoebiusMap random_disk_map(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double t = 1.5 * uni(rng);
    double th = 2.0 * M_PI * uni(rng), ph = 2.0 * M_PI * uni(rng);
    cplx alpha = std::polar(std::cosh(t), th);
    cplx beta = std::polar(std::sinh(t), ph);
    MoebiusMap f{alpha, beta, std::conj(beta), std::conj(alpha), Orientation::conformal,
                 Model::disk};
    return normalized(f);
}

MoebiusMap random_halfplane_map(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    double a = 0.0, b, c;
    while (std::abs(a) < 0.2) a = uni(rng);
    b = uni(rng);
    c = uni(rng);
    double d = (1.0 + b * c) / a;
    MoebiusMap f = from_entries(a, b, c, d, Model::halfplane);
    f.model = Model::halfplane;
    return f;
}

cplx random_disk_point(std::mt19937_64& rng, double rmax = 0.9) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return std::polar(rmax * std::sqrt(uni(rng)), 2.0 * M_PI * uni(rng));
}

}  // namespace

TEST_CASE("compose: identity and the generator products") {
    MoebiusMap id = identity_map(Model::plane);
    MoebiusMap tau = reflection_in_imaginary_axis();
    MoebiusMap sigma1 = reflection_in_circle(1.0, 1.0);

    MoebiusMap g = compose(id, tau);
    CHECK(matrix_distance(g, tau) < 1e-12);

    // tau o sigma_1 = z -> -z/(z-1)
    MoebiusMap g1 = compose(tau, sigma1);
    CHECK(g1.orientation == Orientation::conformal);
    MoebiusMap expected1 = from_entries(-1.0, 0.0, 1.0, -1.0, Model::plane);
    CHECK(matrix_distance(g1, expected1) < 1e-12);
    cplx z(0.3, 0.8);
    CHECK(std::abs(fgt::apply(g1, z) - (-z / (z - 1.0))) < 1e-12);
    CHECK(std::abs(fgt::apply(g1, cplx(0.0)) - cplx(0.0)) < 1e-15);  // parabolic fixed point

    // tau o sigma_2 with center 3 radius 1 = z -> (-3z+8)/(z-3)
    MoebiusMap g2 = compose(tau, reflection_in_circle(3.0, 1.0));
    MoebiusMap expected2 = from_entries(-3.0, 8.0, 1.0, -3.0, Model::plane);
    CHECK(matrix_distance(g2, expected2) < 1e-12);
    CHECK(std::abs(fgt::apply(g2, z) - (-3.0 * z + 8.0) / (z - 3.0)) < 1e-12);

    CHECK_THROWS_AS(compose(identity_map(Model::disk), identity_map(Model::halfplane)),
                    model_mismatch_error);
}

TEST_CASE("apply: conjugation, poles, model points") {
    MoebiusMap tau = reflection_in_imaginary_axis();
    cplx z(0.7, 0.4);
    CHECK(std::abs(fgt::apply(tau, z) - cplx(-0.7, 0.4)) < 1e-15);

    MoebiusMap id = identity_map(Model::disk);
    ModelPoint p(cplx(0.3, 0.1), Model::disk);
    CHECK(std::abs(fgt::apply(id, p).value - cplx(0.3, 0.1)) == 0.0);

    MoebiusMap g1 = from_entries(-1.0, 0.0, 1.0, -1.0);
    CHECK_THROWS_AS(fgt::apply(g1, cplx(1.0, 0.0)), pole_error);  // pole at z = 1

    CHECK_THROWS_AS(ModelPoint(cplx(1.5, 0.0), Model::disk), error);
    CHECK_THROWS_AS(ModelPoint(cplx(0.0, -1.0), Model::halfplane), error);
}

TEST_CASE("inverse and derivative") {
    MoebiusMap g1 = from_entries(-1.0, 0.0, 1.0, -1.0);
    CHECK(std::abs(derivative(identity_map(Model::disk), cplx(0.3, 0.2)) - 1.0) < 1e-15);
    CHECK(std::abs(derivative(g1, cplx(2.0, 0.0)) - 1.0) < 1e-12);  // 1/(2-1)^2

    MoebiusMap inv = inverse(g1);
    MoebiusMap expect = from_entries(-1.0, 0.0, -1.0, -1.0);
    CHECK(matrix_distance(inv, expect) < 1e-12);
    CHECK(matrix_distance(compose(inv, g1), identity_map(Model::halfplane)) < 1e-12);

    MoebiusMap tau = reflection_in_imaginary_axis();
    CHECK_THROWS_AS(derivative(tau, cplx(0.1, 0.1)), error);
}

TEST_CASE("reflections fix their circle and are involutions") {
    MoebiusMap s = reflection_in_circle(0.0, 1.0);
    CHECK(std::abs(fgt::apply(s, cplx(2.0, 0.0)) - cplx(0.5, 0.0)) < 1e-14);

    MoebiusMap s1 = reflection_in_circle(1.0, 1.0);
    cplx on_circle(1.0, 1.0);
    CHECK(std::abs(fgt::apply(s1, on_circle) - on_circle) < 1e-14);

    CHECK(matrix_distance(compose(s1, s1), identity_map(Model::plane)) < 1e-12);
    MoebiusMap tau = reflection_in_imaginary_axis();
    CHECK(matrix_distance(compose(tau, tau), identity_map(Model::plane)) < 1e-12);
}

TEST_CASE("cayley transform") {
    CHECK(std::abs(cayley(cplx(0.0, 1.0))) < 1e-15);
    CHECK(std::abs(cayley(cplx(0.0, 0.0)) - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(cayley(cplx(1.0, 0.0)) - cplx(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(cayley_inv(cplx(0.0, 0.0)) - cplx(0.0, 1.0)) < 1e-15);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        cplx z = random_disk_point(rng);
        CHECK(std::abs(cayley(cayley_inv(z)) - z) < 1e-12);
    }
}

TEST_CASE("hyperbolic distance in the half-density convention") {
    ModelPoint o(cplx(0.0), Model::disk);
    CHECK(hyperbolic_distance(o, o) == 0.0);
    ModelPoint h(cplx(0.5, 0.0), Model::disk);
    CHECK(std::abs(hyperbolic_distance(o, h) - 0.5 * std::log(3.0)) < 1e-14);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        cplx z = random_disk_point(rng), w = random_disk_point(rng);
        MoebiusMap g = random_disk_map(rng);
        ModelPoint pz(z, Model::disk), pw(w, Model::disk);
        double d0 = hyperbolic_distance(pz, pw);
        double d1 = hyperbolic_distance(fgt::apply(g, pz), fgt::apply(g, pw));
        CHECK(std::abs(d0 - d1) < 1e-10);
        // triangle inequality through a third point
        cplx u = random_disk_point(rng);
        ModelPoint pu(u, Model::disk);
        CHECK(d0 <= hyperbolic_distance(pz, pu) + hyperbolic_distance(pu, pw) + 1e-12);
    }
}

TEST_CASE("cayley compatibility of the two models") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        cplx z(uni(rng), 0.2 + 2.0 * std::abs(uni(rng)));
        cplx w(uni(rng), 0.2 + 2.0 * std::abs(uni(rng)));
        ModelPoint hz(z, Model::halfplane), hw(w, Model::halfplane);
        double dh = hyperbolic_distance(hz, hw);
        double dd = hyperbolic_distance(cayley(hz), cayley(hw));
        CHECK(std::abs(dh - dd) < 1e-10);
    }
}

TEST_CASE("classification by trace") {
    CHECK(classify(identity_map(Model::disk)) == MapClass::identity);
    CHECK(classify(from_entries(-1.0, 0.0, 1.0, -1.0)) == MapClass::parabolic);
    CHECK(classify(from_entries(-3.0, 8.0, 1.0, -3.0)) == MapClass::hyperbolic);
    // rotation by 90 degrees around 0 in the disk
    MoebiusMap rot{std::polar(1.0, M_PI / 4.0), 0.0, 0.0, std::polar(1.0, -M_PI / 4.0),
                   Orientation::conformal, Model::disk};
    CHECK(classify(rot) == MapClass::elliptic);

    CHECK(std::abs(parabolic_fixed_point(from_entries(-1.0, 0.0, 1.0, -1.0))) < 1e-12);
    MoebiusMap p2 = from_entries(-5.0, 8.0, -2.0, 3.0);
    CHECK(std::abs(parabolic_fixed_point(p2) - cplx(2.0, 0.0)) < 1e-10);
}

TEST_CASE("property: associativity of apply/compose over 1000 random triples") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 1000; ++i) {
        MoebiusMap f = random_disk_map(rng), g = random_disk_map(rng);
        cplx z = random_disk_point(rng);
        cplx lhs = fgt::apply(compose(f, g), z);
        cplx rhs = fgt::apply(f, fgt::apply(g, z));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("property: determinant preserved by compose and inverse") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 1000; ++i) {
        MoebiusMap f = random_disk_map(rng), g = random_disk_map(rng);
        CHECK(std::abs(compose(f, g).det() - 1.0) < 1e-12);
        CHECK(std::abs(inverse(f).det() - 1.0) < 1e-12);
    }
}

TEST_CASE("property: chain rule against central finite differences") {
    std::mt19937_64 rng(23);
    const double h = 1e-5;
    for (int i = 0; i < 1000; ++i) {
        MoebiusMap f = random_disk_map(rng), g = random_disk_map(rng);
        MoebiusMap fg = compose(f, g);
        cplx z = random_disk_point(rng, 0.7);
        cplx exact = derivative(fg, z);
        cplx chained = derivative(f, fgt::apply(g, z)) * derivative(g, z);
        CHECK(std::abs(exact - chained) < 1e-8 * std::abs(exact));
        cplx fd = (fgt::apply(fg, z + h) - fgt::apply(fg, z - h)) / (2.0 * h);
        CHECK(std::abs(fd - exact) < 1e-6 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("property: halfplane maps with real entries preserve the halfplane") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        MoebiusMap f = random_halfplane_map(rng);
        cplx z(uni(rng), 0.01 + std::abs(uni(rng)));
        CHECK(fgt::apply(f, z).imag() > 0.0);
    }
}

TEST_CASE("normalization gives a canonical representative") {
    MoebiusMap f = from_entries(-3.0, 8.0, 1.0, -3.0);
    MoebiusMap g = f;
    g.a = -g.a;
    g.b = -g.b;
    g.c = -g.c;
    g.d = -g.d;
    CHECK(matrix_distance(f, g) < 1e-15);
    MoebiusMap n1 = normalized(f), n2 = normalized(g);
    CHECK(std::abs(n1.a - n2.a) < 1e-15);
    CHECK(std::abs(n1.d - n2.d) < 1e-15);
}

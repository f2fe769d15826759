#include "fgt/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fgt {

namespace {

constexpr double kDetTol = 1e-12;
constexpr double kPoleTol = 1e-14;
constexpr double kTraceTol = 1e-9;

double abs2(cplx z) { return std::norm(z); }

}  // namespace

const char* to_string(Model m) {
    switch (m) {
        case Model::disk: return "disk";
        case Model::halfplane: return "halfplane";
        case Model::plane: return "plane";
    }
    return "?";
}

const char* to_string(MapClass c) {
    switch (c) {
        case MapClass::identity: return "identity";
        case MapClass::elliptic: return "elliptic";
        case MapClass::parabolic: return "parabolic";
        case MapClass::hyperbolic: return "hyperbolic";
    }
    return "?";
}

ModelPoint::ModelPoint(cplx v, Model m) : value(v), model(m) {
    if (m == Model::disk && std::abs(v) >= 1.0 + 1e-12)
        throw error("point outside closed disk: |z| = " + std::to_string(std::abs(v)));
    if (m == Model::halfplane && v.imag() <= -1e-12)
        throw error("point below real axis: Im z = " + std::to_string(v.imag()));
}

bool MoebiusMap::is_identity(double tol) const {
    if (orientation != Orientation::conformal) return false;
    const MoebiusMap n = normalized(*this);
    double plus = std::max(std::max(std::abs(n.a - 1.0), std::abs(n.d - 1.0)),
                           std::max(std::abs(n.b), std::abs(n.c)));
    double minus = std::max(std::max(std::abs(n.a + 1.0), std::abs(n.d + 1.0)),
                            std::max(std::abs(n.b), std::abs(n.c)));
    return std::min(plus, minus) < tol;
}

MoebiusMap identity_map(Model m) {
    return MoebiusMap{1.0, 0.0, 0.0, 1.0, Orientation::conformal, m};
}

MoebiusMap normalized(const MoebiusMap& f) {
    cplx det = f.det();
    if (std::abs(det) < 1e-300) throw error("degenerate Moebius matrix (det = 0)");
    MoebiusMap g = f;
    cplx s = std::sqrt(det);
    g.a /= s;
    g.b /= s;
    g.c /= s;
    g.d /= s;
    // sign canonicalization
    const cplx entries[4] = {g.a, g.b, g.c, g.d};
    double scale = 0.0;
    for (const cplx& e : entries) scale = std::max(scale, std::abs(e));
    for (const cplx& e : entries) {
        if (std::abs(e) <= 1e-9 * scale) continue;
        bool flip = e.real() < 0.0 ||
                    (std::abs(e.real()) <= 1e-12 * scale && e.imag() < 0.0);
        if (flip) {
            g.a = -g.a;
            g.b = -g.b;
            g.c = -g.c;
            g.d = -g.d;
        }
        break;
    }
    return g;
}

double matrix_distance(const MoebiusMap& f, const MoebiusMap& g) {
    if (f.orientation != g.orientation) return 2.0;
    const MoebiusMap x = normalized(f), y = normalized(g);
    auto entrymax = [](const MoebiusMap& u, const MoebiusMap& v, double sign) {
        double m = 0.0;
        m = std::max(m, std::abs(u.a - sign * v.a));
        m = std::max(m, std::abs(u.b - sign * v.b));
        m = std::max(m, std::abs(u.c - sign * v.c));
        m = std::max(m, std::abs(u.d - sign * v.d));
        return m;
    };
    return std::min(entrymax(x, y, 1.0), entrymax(x, y, -1.0));
}

MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g) {
    if (f.model != g.model)
        throw model_mismatch_error(std::string("compose: model mismatch (") + to_string(f.model) +
                                   " vs " + to_string(g.model) + ")");
    // (f o g): when f is anticonformal it conjugates g's coefficients.
    cplx ga = g.a, gb = g.b, gc = g.c, gd = g.d;
    if (f.orientation == Orientation::anticonformal) {
        ga = std::conj(ga);
        gb = std::conj(gb);
        gc = std::conj(gc);
        gd = std::conj(gd);
    }
    MoebiusMap h;
    h.a = f.a * ga + f.b * gc;
    h.b = f.a * gb + f.b * gd;
    h.c = f.c * ga + f.d * gc;
    h.d = f.c * gb + f.d * gd;
    h.orientation = (f.orientation == g.orientation) ? Orientation::conformal
                                                     : Orientation::anticonformal;
    h.model = f.model;
    h = normalized(h);
    if (std::abs(h.det() - 1.0) > kDetTol) throw error("compose: normalization failed");
    return h;
}

cplx apply(const MoebiusMap& f, cplx z) {
    if (f.orientation == Orientation::anticonformal) z = std::conj(z);
    cplx den = f.c * z + f.d;
    double scale = std::max(1.0, std::abs(z)) * std::max({std::abs(f.c), std::abs(f.d), 1e-30});
    if (std::abs(den) < kPoleTol * scale)
        throw pole_error("point at infinity (pole of the map)");
    return (f.a * z + f.b) / den;
}

ModelPoint apply(const MoebiusMap& f, const ModelPoint& z) {
    return ModelPoint(fgt::apply(f, z.value), z.model);
}

cplx apply_infinity(const MoebiusMap& f) {
    if (std::abs(f.c) < kPoleTol) throw pole_error("infinity is fixed");
    return f.a / f.c;
}

MoebiusMap inverse(const MoebiusMap& f) {
    MoebiusMap n = normalized(f);
    MoebiusMap g;
    g.model = f.model;
    if (f.orientation == Orientation::conformal) {
        g = MoebiusMap{n.d, -n.b, -n.c, n.a, Orientation::conformal, f.model};
    } else {
        // inverse of z -> M(conj z) is w -> conj(M^{-1} w)
        g = MoebiusMap{std::conj(n.d), std::conj(-n.b), std::conj(-n.c), std::conj(n.a),
                       Orientation::anticonformal, f.model};
    }
    return normalized(g);
}

cplx derivative(const MoebiusMap& f, cplx z) {
    if (f.orientation != Orientation::conformal)
        throw error("not complex-differentiable (anticonformal map)");
    MoebiusMap n = normalized(f);
    cplx den = n.c * z + n.d;
    if (std::abs(den) < kPoleTol) throw pole_error("derivative at the pole");
    return 1.0 / (den * den);
}

MoebiusMap reflection_in_circle(double center, double radius) {
    if (!(radius > 0.0)) throw error("reflection_in_circle: radius must be positive");
    // z -> center + radius^2 / (conj z - center)
    MoebiusMap f;
    f.a = center;
    f.b = radius * radius - center * center;
    f.c = 1.0;
    f.d = -center;
    f.orientation = Orientation::anticonformal;
    f.model = Model::plane;
    return normalized(f);
}

MoebiusMap reflection_in_imaginary_axis() {
    MoebiusMap f;
    f.a = -1.0;
    f.b = 0.0;
    f.c = 0.0;
    f.d = 1.0;
    f.orientation = Orientation::anticonformal;
    f.model = Model::plane;
    return normalized(f);
}

cplx cayley(cplx z) { return (z - cplx(0, 1)) / (z + cplx(0, 1)); }

cplx cayley_inv(cplx z) {
    cplx den = 1.0 - z;
    if (std::abs(den) < kPoleTol) throw pole_error("cayley_inv: pole at z = 1");
    return cplx(0, 1) * (1.0 + z) / den;
}

ModelPoint cayley(const ModelPoint& z) {
    if (z.model != Model::halfplane) throw model_mismatch_error("cayley expects a halfplane point");
    return ModelPoint(cayley(z.value), Model::disk);
}

ModelPoint cayley_inv(const ModelPoint& z) {
    if (z.model != Model::disk) throw model_mismatch_error("cayley_inv expects a disk point");
    return ModelPoint(cayley_inv(z.value), Model::halfplane);
}

namespace {

// kappa as a matrix, normalized: [[1,-i],[1,i]] / sqrt(2i)
MoebiusMap cayley_matrix() {
    MoebiusMap k;
    k.a = 1.0;
    k.b = cplx(0, -1);
    k.c = 1.0;
    k.d = cplx(0, 1);
    k.orientation = Orientation::conformal;
    k.model = Model::plane;
    return normalized(k);
}

}  // namespace

MoebiusMap cayley_conjugate(const MoebiusMap& f) {
    if (f.model != Model::halfplane)
        throw model_mismatch_error("cayley_conjugate expects a halfplane map");
    MoebiusMap k = cayley_matrix();
    MoebiusMap g = f;
    g.model = Model::plane;
    MoebiusMap h = compose(compose(k, g), inverse(k));
    h.model = Model::disk;
    return h;
}

MoebiusMap cayley_conjugate_inv(const MoebiusMap& f) {
    if (f.model != Model::disk)
        throw model_mismatch_error("cayley_conjugate_inv expects a disk map");
    MoebiusMap k = cayley_matrix();
    MoebiusMap g = f;
    g.model = Model::plane;
    MoebiusMap h = compose(compose(inverse(k), g), k);
    h.model = Model::halfplane;
    return h;
}

MoebiusMap cayley_as_map() { return cayley_matrix(); }

Circle map_circle(const MoebiusMap& f, const Circle& c) {
    cplx w[3];
    for (int k = 0; k < 3; ++k) {
        cplx z = c.center + c.radius * std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0);
        w[k] = fgt::apply(f, z);
    }
    double x1 = w[0].real(), y1 = w[0].imag();
    double x2 = w[1].real(), y2 = w[1].imag();
    double x3 = w[2].real(), y3 = w[2].imag();
    double d = 2.0 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2));
    double scale = std::max({std::abs(w[0]), std::abs(w[1]), std::abs(w[2]), 1.0});
    if (std::abs(d) < 1e-12 * scale * scale)
        throw error("map_circle: image is a line (circle meets the pole)");
    double n1 = std::norm(w[0]), n2 = std::norm(w[1]), n3 = std::norm(w[2]);
    cplx center((n1 * (y2 - y3) + n2 * (y3 - y1) + n3 * (y1 - y2)) / d,
                (n1 * (x3 - x2) + n2 * (x1 - x3) + n3 * (x2 - x1)) / d);
    return Circle{center, std::abs(w[0] - center)};
}

double hyperbolic_distance(const ModelPoint& z, const ModelPoint& w) {
    if (z.model != w.model) throw model_mismatch_error("hyperbolic_distance: model mismatch");
    if (z.model == Model::disk) {
        cplx num = z.value - w.value;
        cplx den = 1.0 - std::conj(z.value) * w.value;
        double p = std::abs(num) / std::abs(den);
        if (p >= 1.0) return std::numeric_limits<double>::infinity();
        return std::atanh(p);
    }
    if (z.model == Model::halfplane) {
        double iz = z.value.imag(), iw = w.value.imag();
        if (iz <= 0.0 || iw <= 0.0) return std::numeric_limits<double>::infinity();
        double q = 1.0 + abs2(z.value - w.value) / (2.0 * iz * iw);
        return 0.5 * std::acosh(q);
    }
    throw model_mismatch_error("hyperbolic_distance: needs disk or halfplane points");
}

MapClass classify(const MoebiusMap& f) {
    if (f.orientation != Orientation::conformal)
        throw error("classify: conformal maps only");
    MoebiusMap n = normalized(f);
    if (n.is_identity(1e-9)) return MapClass::identity;
    double t = std::abs(n.trace());
    if (std::abs(t - 2.0) <= kTraceTol) return MapClass::parabolic;
    return t < 2.0 ? MapClass::elliptic : MapClass::hyperbolic;
}

cplx parabolic_fixed_point(const MoebiusMap& f) {
    MoebiusMap n = normalized(f);
    if (classify(n) != MapClass::parabolic) throw error("parabolic_fixed_point: map not parabolic");
    if (std::abs(n.c) < kPoleTol) throw pole_error("parabolic fixed point at infinity");
    // double root of cz^2 + (d-a)z - b = 0
    return (n.a - n.d) / (2.0 * n.c);
}

}  // namespace fgt

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

// Metric convention used throughout this library:
//   disk      lambda(z) = 1 / (1 - |z|^2)            rho(0,x) = (1/2) log((1+x)/(1-x))
//   halfplane lambda(z) = 1 / (2 Im z)               area density 1 / (4 (Im z)^2)
// This is half the curvature -1 metric.  The Cayley transform
// kappa(z) = (z - i)/(z + i) is an isometry between the two models.

namespace fgt {

using cplx = std::complex<double>;

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class model_mismatch_error : public error {
public:
    using error::error;
};

class pole_error : public error {
public:
    using error::error;
};

enum class Model { disk, halfplane, plane };
enum class Orientation { conformal, anticonformal };
enum class MapClass { identity, elliptic, parabolic, hyperbolic };

const char* to_string(Model m);
const char* to_string(MapClass c);

// Point tagged with the model it lives in.  Construction checks the model
// constraint with a small slack so boundary points are representable.
struct ModelPoint {
    cplx value{0.0};
    Model model = Model::disk;

    ModelPoint() = default;
    ModelPoint(cplx v, Model m);
};

// z -> (az + b)/(cz + d), or the same with z replaced by conj(z) when
// anticonformal.  Normalized maps have det = ad - bc = 1.
struct MoebiusMap {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
    Orientation orientation = Orientation::conformal;
    Model model = Model::plane;

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }
    bool is_identity(double tol = 1e-12) const;
};

MoebiusMap identity_map(Model m);

// Scales to det 1 and fixes the overall sign so that the first entry of
// (a,b,c,d) with nonnegligible modulus has positive real part (positive
// imaginary part when the real part vanishes).  Canonical form makes
// deduplication of group elements well defined.
MoebiusMap normalized(const MoebiusMap& f);

// max entry distance between normalized representatives, insensitive to the
// residual sign ambiguity.
double matrix_distance(const MoebiusMap& f, const MoebiusMap& g);

// f after g (apply g first).  Orientation composes by parity.
MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g);

cplx apply(const MoebiusMap& f, cplx z);
ModelPoint apply(const MoebiusMap& f, const ModelPoint& z);
// image of the point at infinity
cplx apply_infinity(const MoebiusMap& f);

MoebiusMap inverse(const MoebiusMap& f);

// complex derivative; defined for conformal maps only.  For det-1 maps this
// is 1/(cz+d)^2.
cplx derivative(const MoebiusMap& f, cplx z);

// anticonformal involution fixing the circle |z - center| = radius
MoebiusMap reflection_in_circle(double center, double radius);

// z -> -conj(z)
MoebiusMap reflection_in_imaginary_axis();

// Cayley transform kappa(z) = (z-i)/(z+i) and its inverse.
cplx cayley(cplx halfplane_z);
cplx cayley_inv(cplx disk_z);
ModelPoint cayley(const ModelPoint& z);
ModelPoint cayley_inv(const ModelPoint& z);

// conjugate a halfplane map to the disk (or back): kappa o f o kappa^{-1}
MoebiusMap cayley_conjugate(const MoebiusMap& halfplane_map);
MoebiusMap cayley_conjugate_inv(const MoebiusMap& disk_map);

struct Circle {
    cplx center{0.0};
    double radius = 0.0;
};

// image of a circle not passing through the pole of f (Moebius maps send
// circles to circles; computed from three image points)
Circle map_circle(const MoebiusMap& f, const Circle& c);

// kappa as a plane map, for conjugation and circle transport
MoebiusMap cayley_as_map();

// distance in the convention above; both points must share a model
double hyperbolic_distance(const ModelPoint& z, const ModelPoint& w);

// trace classification for conformal maps: |tr| < 2 elliptic, = 2 parabolic
// (tolerance 1e-9), > 2 hyperbolic; identity reported separately.
MapClass classify(const MoebiusMap& f);

// fixed point of a parabolic map on the model boundary
cplx parabolic_fixed_point(const MoebiusMap& f);

}  // namespace fgt

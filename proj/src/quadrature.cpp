#include "fgt/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "fgt/denjoy.hpp"

namespace fgt {

namespace {

constexpr int kMaxShells = 70;
constexpr int kDivergenceRun = 4;
constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- 1-D quadrature

double simpson_rule(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth,
                            double* err) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_rule(fa, flm, fm, m - a);
    double right = simpson_rule(fm, frm, fb, b - m);
    double delta = left + right - whole;
    // the relative floor keeps float noise from forcing full-depth recursion
    double accept = std::max(15.0 * tol, 5e-14 * (std::abs(left) + std::abs(right)));
    if (depth <= 0 || std::abs(delta) <= accept) {
        if (err) *err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1, err) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1, err);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        double* err = nullptr) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson_rule(fa, fm, fb, b - a);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, std::max(tol, 1e-300), 28, err);
}

// ---------------------------------------------------------------- shell driver

struct ShellOutcome {
    double increment = 0.0;
    double error = 0.0;
};

// Dyadic boundary-distance shells (d_hi = D 2^{-k}).  Divergence fires when
// increments stop decaying (>= 0.5 of the previous one) over 4 consecutive
// shells; increments below 1e-6 of the peak do not count for the detector.
IntegralResult run_shells(double D, double tol, std::optional<double> clearance,
                          const std::function<ShellOutcome(double, double, double)>& shell_fn) {
    IntegralResult res;
    double prev_inc = -1.0;
    double max_inc = 0.0;
    int run = 0;
    int zero_run = 0;
    for (int k = 0; k < kMaxShells; ++k) {
        double d_hi = D * std::ldexp(1.0, -k);
        double d_lo = 0.5 * d_hi;
        if (clearance && d_hi <= *clearance) return res;  // nothing below the clearance
        double shell_tol = std::max(tol * std::ldexp(1.0, -k - 2), 1e-16);
        ShellOutcome out = shell_fn(d_lo, d_hi, shell_tol);
        res.value += out.increment;
        res.error_estimate += out.error;
        res.refinement_levels = k + 1;
        max_inc = std::max(max_inc, out.increment);

        double floor = std::max(1e-300, 1e-6 * max_inc);
        bool eligible = out.increment > floor;
        bool prev_eligible = prev_inc > floor;
        if (eligible && prev_eligible) {
            double ratio = out.increment / prev_inc;
            res.growth_per_level = ratio;
            // 0.5 with a 10% guard: integrands that are exactly area-like
            // produce ratios approaching 1/2 from above through the rho drho
            // factor, and must not trip the detector
            run = ratio >= 0.55 ? run + 1 : 0;
            if (run >= kDivergenceRun) {
                res.diverged = true;
                return res;
            }
        } else if (prev_inc >= 0.0) {
            run = 0;
        }

        zero_run = out.increment == 0.0 ? zero_run + 1 : 0;
        if (!clearance && zero_run >= 6 && k >= 4) return res;
        if (!clearance && k >= 4 && prev_inc > 0.0) {
            double q = std::min(out.increment / prev_inc, 0.9);
            double tail = out.increment * q / (1.0 - q);
            if (out.increment / prev_inc < 0.92 && out.increment + tail < 0.3 * tol) {
                res.error_estimate += tail;
                return res;
            }
        }
        prev_inc = out.increment;
    }
    res.truncated = true;
    if (prev_inc > 0.0) res.error_estimate += 2.0 * prev_inc;
    return res;
}

// ---------------------------------------------------------------- slice engine

// angular interval of {theta : |rho e^{i theta} - C| < R}, split into pieces
// inside the frame [theta0 - pi, theta0 + pi]
enum class RingHit { empty, full, arcs };

RingHit ring_interval(double rho, cplx C, double R, double theta0,
                      std::vector<std::pair<double, double>>& parts) {
    double ac = std::abs(C);
    if (rho < 1e-14) return std::abs(C) < R ? RingHit::full : RingHit::empty;
    if (ac < 1e-14) return rho < R ? RingHit::full : RingHit::empty;
    double t = (rho * rho + ac * ac - R * R) / (2.0 * rho * ac);
    if (t >= 1.0) return RingHit::empty;
    if (t <= -1.0) return RingHit::full;
    double beta = std::acos(t);
    double phi = std::arg(C);
    phi += 2.0 * kPi * std::round((theta0 - phi) / (2.0 * kPi));
    double lo = phi - beta, hi = phi + beta;
    double flo = theta0 - kPi, fhi = theta0 + kPi;
    if (lo < flo) {
        parts.emplace_back(lo + 2.0 * kPi, fhi);
        parts.emplace_back(flo, hi);
    } else if (hi > fhi) {
        parts.emplace_back(lo, fhi);
        parts.emplace_back(flo, hi - 2.0 * kPi);
    } else {
        parts.emplace_back(lo, hi);
    }
    return RingHit::arcs;
}

double clipped_measure(double cap_lo, double cap_hi,
                       const std::vector<std::pair<double, double>>* support_parts,
                       bool support_full,
                       const std::vector<std::pair<double, double>>& excluded_parts) {
    if (cap_hi <= cap_lo) return 0.0;
    IntervalUnion X(excluded_parts);
    std::vector<std::pair<double, double>> u;
    if (support_full) {
        u.emplace_back(cap_lo, cap_hi);
    } else {
        for (const auto& [a, b] : *support_parts) {
            double lo = std::max(a, cap_lo), hi = std::min(b, cap_hi);
            if (hi > lo) u.emplace_back(lo, hi);
        }
    }
    IntervalUnion U(std::move(u));
    double m = 0.0;
    for (const auto& [a, b] : U.intervals()) m += (b - a) - X.intersection_length(a, b);
    return std::max(m, 0.0);
}

struct SliceContext {
    const CarlesonQuery* query;
    const SliceProfile* profile;
    std::vector<Bisector> bisectors;  // prefiltered restriction sides
    std::vector<Disk> support;        // prefiltered support disks
    double theta0 = 0.0;              // disk: cap center angle
};

// angular measure of the admissible set on the circle |z| = rho
double disk_slice_measure(const SliceContext& ctx, double rho) {
    if (rho < 1e-14) {
        // the center: measure irrelevant for the rho drho integral
        return 0.0;
    }
    const double r = ctx.query->r;
    double t = (rho * rho + 1.0 - r * r) / (2.0 * rho);
    if (t >= 1.0) return 0.0;
    double A = t <= -1.0 ? kPi : std::acos(t);
    double cap_lo = ctx.theta0 - A, cap_hi = ctx.theta0 + A;

    std::vector<std::pair<double, double>> excluded;
    for (const Bisector& b : ctx.bisectors) {
        std::vector<std::pair<double, double>> parts;
        RingHit hit = ring_interval(rho, b.center, b.radius, ctx.theta0, parts);
        if (hit == RingHit::full) return 0.0;  // ring fully excluded
        for (auto& p : parts) excluded.push_back(p);
    }

    bool support_full = ctx.profile->kind != SliceProfile::Kind::constant_on_disks;
    std::vector<std::pair<double, double>> support_parts;
    if (!support_full) {
        for (const Disk& d : ctx.support) {
            std::vector<std::pair<double, double>> parts;
            RingHit hit = ring_interval(rho, d.center, d.radius, ctx.theta0, parts);
            if (hit == RingHit::full) {
                support_full = true;
                break;
            }
            for (auto& p : parts) support_parts.push_back(p);
        }
        if (!support_full && support_parts.empty()) return 0.0;
    }
    return clipped_measure(cap_lo, cap_hi, &support_parts, support_full, excluded);
}

// linear measure of the admissible set on the line Im z = v
double halfplane_slice_measure(const SliceContext& ctx, double v) {
    const double r = ctx.query->r;
    double xi = ctx.query->xi.real();
    if (v >= r) return 0.0;
    double s = std::sqrt(r * r - v * v);
    double cap_lo = xi - s, cap_hi = xi + s;

    std::vector<std::pair<double, double>> excluded;
    for (const Bisector& b : ctx.bisectors) {
        if (b.is_line) {
            if (b.keep_left)
                excluded.emplace_back(std::max(b.line_x, cap_lo), cap_hi);
            else
                excluded.emplace_back(cap_lo, std::min(b.line_x, cap_hi));
            continue;
        }
        double cx = b.center.real(), R = b.radius;
        if (!b.keep_inside) {
            if (R > v) {
                double w = std::sqrt(R * R - v * v);
                excluded.emplace_back(cx - w, cx + w);
            }
        } else {
            if (R > v) {
                double w = std::sqrt(R * R - v * v);
                excluded.emplace_back(cap_lo, std::min(cx - w, cap_hi));
                excluded.emplace_back(std::max(cx + w, cap_lo), cap_hi);
            } else {
                return 0.0;  // slice above the kept disk: everything excluded
            }
        }
    }

    bool support_full = ctx.profile->kind != SliceProfile::Kind::constant_on_disks;
    std::vector<std::pair<double, double>> support_parts;
    if (!support_full) {
        for (const Disk& d : ctx.support) {
            double dy = v - d.center.imag();
            if (std::abs(dy) < d.radius) {
                double w = std::sqrt(d.radius * d.radius - dy * dy);
                support_parts.emplace_back(d.center.real() - w, d.center.real() + w);
            }
        }
        if (support_parts.empty()) return 0.0;
    }
    return clipped_measure(cap_lo, cap_hi, &support_parts, support_full, excluded);
}

double weight_value(Weight w, double dist_coord) {
    // dist_coord: rho in the disk, v in the halfplane
    switch (w) {
        case Weight::disk_carleson: {
            double denom = 1.0 - dist_coord * dist_coord;
            return denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
        }
        case Weight::halfplane_carleson:
            return 1.0 / dist_coord;
        case Weight::halfplane_area:
            return 1.0 / (4.0 * dist_coord * dist_coord);
    }
    return 0.0;
}

IntegralResult slice_integral(const CarlesonQuery& query, const SliceProfile& profile,
                              double tol) {
    if (profile.kind == SliceProfile::Kind::zero) return IntegralResult{};

    SliceContext ctx;
    ctx.query = &query;
    ctx.profile = &profile;
    if (query.model == Model::disk) ctx.theta0 = std::arg(query.xi);

    // prefilter restriction sides and support disks against the cap
    if (query.restriction) {
        for (const Bisector& b : query.restriction->bisectors()) {
            if (query.model == Model::disk) {
                double span = std::asin(std::clamp(b.radius / std::abs(b.center), 0.0, 1.0));
                double dphi = std::abs(std::remainder(std::arg(b.center) - ctx.theta0, 2.0 * kPi));
                double cap_half = std::acos(std::clamp(1.0 - query.r * query.r / 2.0, -1.0, 1.0));
                if (query.r < 1.9 && dphi > cap_half + span + 1e-9) continue;
            } else if (!b.is_line) {
                if (b.center.real() + b.radius < query.xi.real() - query.r ||
                    b.center.real() - b.radius > query.xi.real() + query.r)
                    if (!b.keep_inside) continue;
            }
            ctx.bisectors.push_back(b);
        }
    }
    for (const Disk& d : profile.disks) {
        if (query.model == Model::halfplane) {
            if (d.center.real() + d.radius < query.xi.real() - query.r ||
                d.center.real() - d.radius > query.xi.real() + query.r)
                continue;
        } else {
            if (std::abs(d.center - query.xi) > d.radius + query.r + 1e-12) continue;
        }
        ctx.support.push_back(d);
    }

    const bool disk = query.model == Model::disk;
    const double D = disk ? std::min(query.r, 1.0) : query.r;

    auto integrand = [&](double c) {
        // c = rho (disk) or v (halfplane)
        double m = disk ? disk_slice_measure(ctx, c) : halfplane_slice_measure(ctx, c);
        if (m <= 0.0) return 0.0;
        double p = profile.value_sq;
        if (profile.kind == SliceProfile::Kind::radial_power)
            p *= std::pow(std::max(1.0 - c * c, 0.0), profile.two_alpha);
        double w = weight_value(query.weight, c);
        return disk ? c * m * p * w : m * p * w;
    };

    // radii at which slice geometry changes character
    std::vector<double> events;
    auto add_circle_events = [&](cplx C, double R) {
        if (disk) {
            double ac = std::abs(C);
            events.push_back(std::abs(ac - R));
            events.push_back(ac + R);
        } else {
            events.push_back(R);
            events.push_back(std::abs(C.imag() - R));
            events.push_back(C.imag() + R);
        }
    };
    for (const Bisector& b : ctx.bisectors)
        if (!b.is_line) add_circle_events(b.center, b.radius);
    for (const Disk& d : ctx.support) add_circle_events(d.center, d.radius);
    if (disk) events.push_back(std::abs(1.0 - query.r));
    events.push_back(query.r);
    std::sort(events.begin(), events.end());

    auto shell_fn = [&](double d_lo, double d_hi, double stol) {
        double c_lo = disk ? 1.0 - d_hi : d_lo;
        double c_hi = disk ? 1.0 - d_lo : d_hi;
        std::vector<double> cuts{c_lo, c_hi};
        for (double e : events)
            if (e > c_lo + 1e-15 && e < c_hi - 1e-15) cuts.push_back(e);
        std::sort(cuts.begin(), cuts.end());
        ShellOutcome out;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double piece_tol = stol * (cuts[i + 1] - cuts[i]) / (c_hi - c_lo);
            out.increment += adaptive_simpson(integrand, cuts[i], cuts[i + 1],
                                              std::max(piece_tol, 1e-18), &out.error);
        }
        return out;
    };

    std::optional<double> clearance;
    if (profile.kind == SliceProfile::Kind::constant_on_disks) {
        // below the lowest support disk nothing remains
        double c = std::numeric_limits<double>::infinity();
        for (const Disk& d : ctx.support) {
            double edge = disk ? 1.0 - (std::abs(d.center) + d.radius)
                               : d.center.imag() - d.radius;
            c = std::min(c, edge);
        }
        if (ctx.support.empty()) return IntegralResult{};
        if (c > 0.0) clearance = c;
    }

    return run_shells(D, tol, clearance, shell_fn);
}

// ---------------------------------------------------------------- cell engine

struct CellRect {
    double a0, a1;  // distance band (disk: d from boundary; halfplane: v)
    double b0, b1;  // angle (disk) or x (halfplane)
};

class CellIntegrator {
public:
    CellIntegrator(const BeltramiField& field, const CarlesonQuery& query, double floor_scale)
        : field_(field), query_(query), floor_(floor_scale) {
        disk_ = query.model == Model::disk;
        theta0_ = disk_ ? std::arg(query.xi) : 0.0;
    }

    // integrand with all characteristics sampled pointwise
    double f(cplx z) const {
        if (std::abs(z - query_.xi) > query_.r) return 0.0;
        double coord = disk_ ? std::abs(z) : z.imag();
        if (disk_ && coord >= 1.0) return 0.0;
        if (!disk_ && coord <= 0.0) return 0.0;
        if (query_.restriction && !query_.restriction->membership(z)) return 0.0;
        cplx mu = field_.evaluate(z);
        double m2 = std::norm(mu);
        if (m2 == 0.0) return 0.0;
        return m2 * weight_value(query_.weight, coord);
    }

    cplx point(double a, double b) const {
        if (disk_) return (1.0 - a) * cplx(std::cos(b), std::sin(b));
        return cplx(b, a);
    }

    double sample_mean(const CellRect& c, int n) const {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double a = c.a0 + (c.a1 - c.a0) * (2.0 * i + 1.0) / (2.0 * n);
                double b = c.b0 + (c.b1 - c.b0) * (2.0 * j + 1.0) / (2.0 * n);
                double v = f(point(a, b));
                if (disk_) v *= 1.0 - a;  // rho of the area element rho drho dtheta
                acc += v;
            }
        return acc / (n * n);
    }

    double cell_area(const CellRect& c) const { return (c.a1 - c.a0) * (c.b1 - c.b0); }

    // true when the cell cannot meet the cap
    bool outside_cap(const CellRect& c) const {
        cplx mid = point(0.5 * (c.a0 + c.a1), 0.5 * (c.b0 + c.b1));
        double half_diag;
        if (disk_)
            half_diag = 0.5 * std::hypot(c.a1 - c.a0, (c.b1 - c.b0) * 1.0);
        else
            half_diag = 0.5 * std::hypot(c.a1 - c.a0, c.b1 - c.b0);
        return std::abs(mid - query_.xi) > query_.r + half_diag;
    }

    ShellOutcome integrate_shell(double d_lo, double d_hi, double stol, bool* truncated) {
        ShellOutcome out;
        // angular (or horizontal) extent of the cap in this shell
        double b_lo, b_hi;
        if (disk_) {
            double rho_hi = 1.0 - d_lo;
            double t = (rho_hi * rho_hi + 1.0 - query_.r * query_.r) / (2.0 * rho_hi);
            if (t >= 1.0) return out;
            double A = t <= -1.0 ? kPi : std::acos(t);
            b_lo = theta0_ - A;
            b_hi = theta0_ + A;
        } else {
            if (d_lo >= query_.r) return out;
            double s = std::sqrt(query_.r * query_.r - d_lo * d_lo);
            b_lo = query_.xi.real() - s;
            b_hi = query_.xi.real() + s;
        }
        double width = d_hi - d_lo;
        int n = static_cast<int>(
            std::clamp(std::ceil((b_hi - b_lo) / std::max(width, 1e-12)), 1.0, 64.0));
        double shell_area = (b_hi - b_lo) * width;
        double tol_density = stol / std::max(shell_area, 1e-300);

        std::deque<std::pair<CellRect, double>> queue;  // cell, coarse estimate
        for (int j = 0; j < n; ++j) {
            CellRect c{d_lo, d_hi, b_lo + (b_hi - b_lo) * j / n, b_lo + (b_hi - b_lo) * (j + 1) / n};
            queue.emplace_back(c, sample_mean(c, 3) * cell_area(c));
        }
        std::size_t budget = 60000;
        while (!queue.empty()) {
            auto [c, coarse] = queue.front();
            queue.pop_front();
            if (outside_cap(c)) continue;
            double len_a = c.a1 - c.a0;
            double len_b = disk_ ? (c.b1 - c.b0) * (1.0 - c.a0) : (c.b1 - c.b0);
            if ((len_a <= floor_ && len_b <= floor_) || queue.size() > budget) {
                double fine = sample_mean(c, 4) * cell_area(c);
                out.increment += fine;
                out.error += 0.5 * std::abs(fine - coarse);
                if (queue.size() > budget) *truncated = true;
                continue;
            }
            CellRect kids[4];
            double am = 0.5 * (c.a0 + c.a1), bm = 0.5 * (c.b0 + c.b1);
            kids[0] = {c.a0, am, c.b0, bm};
            kids[1] = {c.a0, am, bm, c.b1};
            kids[2] = {am, c.a1, c.b0, bm};
            kids[3] = {am, c.a1, bm, c.b1};
            double fine = 0.0;
            double kid_est[4];
            for (int q = 0; q < 4; ++q) {
                kid_est[q] = sample_mean(kids[q], 3) * cell_area(kids[q]);
                fine += kid_est[q];
            }
            double diff = std::abs(fine - coarse);
            if (diff <= tol_density * cell_area(c)) {
                out.increment += fine;
                out.error += diff;
            } else {
                for (int q = 0; q < 4; ++q) queue.emplace_back(kids[q], kid_est[q]);
            }
        }
        return out;
    }

private:
    const BeltramiField& field_;
    const CarlesonQuery& query_;
    double floor_;
    bool disk_;
    double theta0_;
};

IntegralResult cell_integral(const BeltramiField& field, const CarlesonQuery& query, double tol) {
    CellIntegrator ci(field, query, 1e-5 * query.r);
    const double D = query.model == Model::disk ? std::min(query.r, 1.0) : query.r;
    bool truncated = false;
    IntegralResult res = run_shells(D, tol, field.boundary_clearance(),
                                    [&](double d_lo, double d_hi, double stol) {
                                        return ci.integrate_shell(d_lo, d_hi, stol, &truncated);
                                    });
    res.truncated = res.truncated || truncated;
    return res;
}

void validate_query(const BeltramiField* field, const CarlesonQuery& query) {
    if (query.model == Model::disk) {
        if (std::abs(std::abs(query.xi) - 1.0) > 1e-10)
            throw error("query: xi must lie on the unit circle");
        if (!(query.r > 0.0) || query.r >= 2.0) throw error("query: disk radius in (0, 2)");
        if (query.weight != Weight::disk_carleson)
            throw error("query: disk model uses the disk weight");
    } else if (query.model == Model::halfplane) {
        if (std::abs(query.xi.imag()) > 1e-10) throw error("query: xi must lie on the real axis");
        if (!(query.r > 0.0) || query.r >= 1.0) throw error("query: halfplane radius in (0, 1)");
        if (query.weight == Weight::disk_carleson)
            throw error("query: halfplane model uses a halfplane weight");
    } else {
        throw error("query: disk or halfplane model");
    }
    if (field && field->model() != query.model)
        throw model_mismatch_error("query model differs from the field model");
    if (query.restriction && query.restriction->model() != query.model)
        throw model_mismatch_error("query model differs from the restriction model");
}

}  // namespace

const char* to_string(Weight w) {
    switch (w) {
        case Weight::disk_carleson: return "1/(1-|z|^2)";
        case Weight::halfplane_carleson: return "1/Im(z)";
        case Weight::halfplane_area: return "1/(4 Im(z)^2)";
    }
    return "?";
}

IntegralResult box_integral(const BeltramiField& field, const CarlesonQuery& query, double tol) {
    validate_query(&field, query);
    if (!(tol > 0.0)) throw error("box_integral: tol must be positive");
    auto profile = field.slice_profile();
    if (profile) {
        if (profile->kind == SliceProfile::Kind::radial_power && query.model != Model::disk)
            profile.reset();
    }
    if (profile) return slice_integral(query, *profile, tol);
    return cell_integral(field, query, tol);
}

IntegralResult restricted_integral(const BeltramiField& field, const CarlesonQuery& query,
                                   double tol) {
    if (!query.restriction) throw error("restricted_integral: query carries no restriction");
    return box_integral(field, query, tol);
}

IntegralResult weighted_area(const CarlesonQuery& query, double tol) {
    validate_query(nullptr, query);
    SliceProfile unit;
    unit.kind = SliceProfile::Kind::constant;
    unit.value_sq = 1.0;
    return slice_integral(query, unit, tol);
}

double cusp_inner_integral(double r, double r_a, double r_b) {
    if (!(r_a > 0.0) || !(r_b > 0.0)) throw error("cusp radii must be positive");
    if (!(r > 0.0)) throw error("cusp_inner_integral: r must be positive");
    double cap = 2.0 * std::min(r_a, r_b);
    if (r > cap * (1.0 + 1e-12))
        throw error("cusp sector empty beyond tangency (r > 2 min radius)");
    double xa = std::min(r / (2.0 * r_a), 1.0);
    double xb = std::min(r / (2.0 * r_b), 1.0);
    auto cot_term = [](double x) { return x / std::sqrt(std::max(1.0 - x * x, 1e-300)); };
    return (cot_term(xa) + cot_term(xb)) / (4.0 * r);
}

double cusp_sector_integral(double r_a, double r_b, double R, double tol) {
    if (!(R > 0.0)) throw error("cusp_sector_integral: R must be positive");
    if (R > 2.0 * std::min(r_a, r_b) * (1.0 + 1e-12))
        throw error("cusp sector empty beyond tangency (R > 2 min radius)");
    auto f = [&](double r) {
        if (r <= 0.0) return 0.125 * (1.0 / r_a + 1.0 / r_b);
        return cusp_inner_integral(std::min(r, R), r_a, r_b);
    };
    return adaptive_simpson(f, 0.0, R, tol);
}

double cusp_area_bound(double r_a, double r_b) {
    if (2.0 * std::min(r_a, r_b) <= 1.0)
        throw error("cusp_area_bound assumes side radii above 1/2");
    return cusp_inner_integral(1.0, r_a, r_b);  // times R_max = 1
}

OrbitDecompositionResult orbit_decomposition_check(const InvariantExtensionField& field,
                                                   const CarlesonQuery& query, double tol) {
    validate_query(&field, query);
    if (query.model != Model::disk)
        throw error("orbit_decomposition_check: disk model queries only");
    const OrbitTable& table = field.table();

    // compatibility spot check
    std::vector<Disk> supp = field.support_disks();
    if (supp.empty()) throw error("orbit check needs a compactly supported base field");
    {
        int checked = 0;
        for (const OrbitEntry& e : table.entries) {
            if (e.word_length != 1) continue;
            for (int s = 0; s < 4; ++s) {
                cplx z = supp[0].center +
                         0.5 * supp[0].radius * std::polar(1.0, 0.7 + 1.9 * s);
                if (compatibility_residual(field, e.map, z) > 1e-6)
                    throw error("orbit check: field is not compatible with the group");
                ++checked;
            }
            if (checked >= 8) break;
        }
    }

    OrbitDecompositionResult out;
    out.lhs = box_integral(field, query, 0.5 * tol);
    if (out.lhs.diverged) {
        out.residual = std::numeric_limits<double>::infinity();
        return out;
    }

    // does the support sit strictly inside the domain? then chi_F drops out
    const FundamentalDomainView& fd = field.domain();
    bool support_in_domain = true;
    for (const Disk& d : supp) {
        for (const Bisector& b : fd.bisectors()) {
            double margin = b.keep_inside ? b.radius - std::abs(d.center - b.center)
                                          : std::abs(d.center - b.center) - b.radius;
            if (margin < d.radius + 1e-9) {
                support_in_domain = false;
                break;
            }
        }
        if (!support_in_domain) break;
    }

    // prefilter terms: the preimage of the cap must reach the support
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const OrbitEntry& e = table.entries[i];
        bool keep = true;
        try {
            Circle pre = map_circle(inverse(e.map), Circle{query.xi, query.r});
            cplx marker = fgt::apply(inverse(e.map), query.xi * (1.0 - 0.5 * query.r));
            bool inside = std::abs(marker - pre.center) < pre.radius;
            keep = false;
            for (const Disk& d : supp) {
                double dist = std::abs(pre.center - d.center);
                bool overlap = inside ? dist <= pre.radius + d.radius
                                      : dist + d.radius >= pre.radius;
                if (overlap) {
                    keep = true;
                    break;
                }
            }
        } catch (const error&) {
            keep = true;  // preimage is a halfplane: cannot prefilter
        }
        if (!keep) continue;
        active.push_back(i);
    }
    out.active_terms = active.size();
    out.rhs_level_increments.assign(table.max_word_length + 1, 0.0);

    const double term_tol = 0.5 * tol / std::max<std::size_t>(active.size(), 1);
    for (std::size_t i : active) {
        const OrbitEntry& e = table.entries[i];
        double term = 0.0;
        for (const Disk& d : supp) {
            auto integrand = [&](cplx z) {
                if (std::abs(z) >= 1.0) return 0.0;
                cplx gz;
                cplx dg;
                try {
                    gz = fgt::apply(e.map, z);
                    dg = derivative(e.map, z);
                } catch (const pole_error&) {
                    return 0.0;
                }
                if (std::abs(gz - query.xi) > query.r) return 0.0;
                if (!support_in_domain && !fd.membership(z)) return 0.0;
                double m2 = std::norm(field.base().evaluate(z));
                if (m2 == 0.0) return 0.0;
                return m2 / (1.0 - std::norm(z)) * std::abs(dg);
            };
            cplx lo = d.center - cplx(d.radius, d.radius);
            cplx hi = d.center + cplx(d.radius, d.radius);
            term += integrate_rectangle(integrand, lo, hi, term_tol / supp.size(),
                                        2e-4 * d.radius);
        }
        out.rhs += term;
        out.rhs_level_increments[e.word_length] += term;
    }
    out.residual = std::abs(out.lhs.value - out.rhs);
    return out;
}

CarlesonReport carleson_norm_estimate(const BeltramiField& field, const std::vector<cplx>& xis,
                                      const std::vector<double>& rs, Weight weight, Model model,
                                      const FundamentalDomainView* restriction, double tol,
                                      int workers) {
    CarlesonReport report;
    report.restriction_descriptor = restriction ? "fundamental-domain" : "none";
    report.depth = restriction ? restriction->table().max_word_length : 0;
    report.rows.resize(xis.size() * rs.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        std::size_t k;
        while ((k = next.fetch_add(1)) < report.rows.size()) {
            std::size_t i = k / rs.size(), j = k % rs.size();
            CarlesonQuery q;
            q.xi = xis[i];
            q.r = rs[j];
            q.weight = weight;
            q.model = model;
            q.restriction = restriction;
            IntegralResult res = box_integral(field, q, tol);
            CarlesonRow row;
            row.xi = q.xi;
            row.r = q.r;
            row.value = res.value;
            row.ratio = res.value / q.r;
            row.diverged = res.diverged;
            row.truncated = res.truncated;
            report.rows[k] = row;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        const CarlesonRow& row = report.rows[k];
        report.any_diverged = report.any_diverged || row.diverged;
        report.any_truncated = report.any_truncated || row.truncated;
        if (row.ratio > report.sup_ratio) {
            report.sup_ratio = row.ratio;
            report.argmax_index = k;
        }
    }
    return report;
}

double integrate_rectangle(const std::function<double(cplx)>& f, cplx lo, cplx hi, double tol,
                           double floor_scale) {
    struct Cell {
        double x0, y0, x1, y1;
        double est;
    };
    auto estimate = [&](double x0, double y0, double x1, double y1, int n) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                acc += f(cplx(x0 + (x1 - x0) * (2.0 * i + 1.0) / (2.0 * n),
                              y0 + (y1 - y0) * (2.0 * j + 1.0) / (2.0 * n)));
        return acc / (n * n) * (x1 - x0) * (y1 - y0);
    };
    double area_total = (hi.real() - lo.real()) * (hi.imag() - lo.imag());
    if (area_total <= 0.0) return 0.0;
    double tol_density = tol / area_total;

    std::deque<Cell> queue;
    queue.push_back({lo.real(), lo.imag(), hi.real(), hi.imag(),
                     estimate(lo.real(), lo.imag(), hi.real(), hi.imag(), 3)});
    double value = 0.0;
    std::size_t processed = 0;
    const std::size_t budget = 400000;
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        ++processed;
        double wx = c.x1 - c.x0, wy = c.y1 - c.y0;
        if ((wx <= floor_scale && wy <= floor_scale) || processed > budget) {
            value += estimate(c.x0, c.y0, c.x1, c.y1, 4);
            continue;
        }
        double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
        Cell kids[4] = {{c.x0, c.y0, xm, ym, 0}, {xm, c.y0, c.x1, ym, 0},
                        {c.x0, ym, xm, c.y1, 0}, {xm, ym, c.x1, c.y1, 0}};
        double fine = 0.0;
        for (Cell& k : kids) {
            k.est = estimate(k.x0, k.y0, k.x1, k.y1, 3);
            fine += k.est;
        }
        if (std::abs(fine - c.est) <= tol_density * wx * wy) {
            value += fine;
        } else {
            for (Cell& k : kids) queue.push_back(k);
        }
    }
    return value;
}

}  // namespace fgt
